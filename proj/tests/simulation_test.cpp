#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "psewer/error.hpp"
#include "psewer/simulation.hpp"
#include "sim_helpers.hpp"

namespace psewer {
namespace {

using testing::constant_inflow_unit;
using testing::reference;

TEST(Simulation, ZeroInflowProducesNoEvents) {
    auto cfg = constant_inflow_unit("A", 0.0, 0.3, 1.0);
    const auto r = run_simulation(cfg);
    EXPECT_TRUE(r.events.empty());
    for (double x : r.aggregate_outflow) ASSERT_EQ(x, 0.0);
    EXPECT_EQ(r.final_states[0].volume, 0.3);
}

TEST(Simulation, FloorBlockedPumpsGiveZeroAggregate) {
    auto cfg = reference("ABCD", 1, 1.0);
    cfg.initial_volume = cfg.tank.v_dead;
    cfg.profile.daily_mean = 0.0;
    const auto r = run_simulation(cfg);
    EXPECT_TRUE(r.events.empty());
    for (double x : r.aggregate_outflow) ASSERT_EQ(x, 0.0);
}

TEST(Simulation, OnOffFillAndDrainTimesMatchClosedForm) {
    const double daily = 0.54;
    auto cfg = constant_inflow_unit("A", daily, 0.10, 3.0);
    const auto r = run_simulation(cfg);
    ASSERT_FALSE(r.events.empty());

    const double q = daily / 86400.0;
    const double t_on = (cfg.tank.v_high - 0.10) / q;
    const auto& first = r.events.front();
    EXPECT_EQ(first.source, PumpSource::FailSafe);
    EXPECT_GE(first.t_start, t_on - 1e-6);
    EXPECT_LE(first.t_start - t_on, cfg.dt);

    const double v_on = 0.10 + first.t_start * q;
    const double t_off = first.t_start + (v_on - cfg.tank.v_off) / (cfg.tank.pump_rate - q);
    EXPECT_LE(std::abs(first.t_end - t_off), cfg.dt);
}

TEST(Simulation, LearningAdaptsToUnequalProduction) {
    const auto r = run_simulation(reference("ABCD"));
    ASSERT_FALSE(r.learning_trace.empty());
    std::vector<double> final_modif(r.n_units);
    for (const auto& s : r.learning_trace) final_modif[s.unit] = s.t_pump_modif;

    // Heavier producers end up with longer corrections than lighter ones.
    std::vector<std::size_t> order(r.n_units);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return r.unit_scale[a] < r.unit_scale[b]; });
    double light = 0.0, heavy = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        light += final_modif[order[i]];
        heavy += final_modif[order[r.n_units - 1 - i]];
    }
    EXPECT_GT(heavy, light + 40.0);
    EXPECT_GT(std::count_if(final_modif.begin(), final_modif.end(), [](double m) { return m != 0.0; }),
              6);
}

TEST(Simulation, DeterministicForEqualConfigs) {
    const auto a = run_simulation(reference("ABCD", 3, 2.0));
    const auto b = run_simulation(reference("ABCD", 3, 2.0));
    EXPECT_EQ(a.aggregate_outflow, b.aggregate_outflow);
    ASSERT_EQ(a.events.size(), b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        EXPECT_EQ(a.events[i].t_start, b.events[i].t_start);
        EXPECT_EQ(a.events[i].volume, b.events[i].volume);
    }
    const auto c = run_simulation(reference("ABCD", 4, 2.0));
    EXPECT_NE(a.aggregate_outflow, c.aggregate_outflow);
}

TEST(Simulation, VisitOrderDoesNotChangeResults) {
    const auto cfg = reference("ABCD", 2, 2.0);
    World forward(cfg), backward(cfg);
    std::vector<std::size_t> rev(cfg.n_units);
    std::iota(rev.rbegin(), rev.rend(), std::size_t{0});
    std::mt19937 gen(9);
    while (!forward.done()) {
        forward.step();
        std::shuffle(rev.begin(), rev.end(), gen);
        backward.step(rev);
    }
    const auto a = std::move(forward).finish();
    const auto b = std::move(backward).finish();
    EXPECT_EQ(a.aggregate_outflow, b.aggregate_outflow);
    ASSERT_EQ(a.events.size(), b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        EXPECT_EQ(a.events[i].unit, b.events[i].unit);
        EXPECT_EQ(a.events[i].t_end, b.events[i].t_end);
    }
}

TEST(Simulation, ManualSteppingEqualsRun) {
    const auto cfg = reference("ABD", 6, 1.0);
    World w(cfg);
    for (int i = 0; i < 1000; ++i) w.step();
    EXPECT_EQ(w.step_index(), 1000u);
    const auto stepped = std::move(w).finish();
    EXPECT_EQ(stepped.aggregate_outflow, run_simulation(cfg).aggregate_outflow);
}

TEST(Simulation, GlobalMassConservation) {
    for (const char* m : {"A", "AB", "ABC", "ABD", "ABCD"}) {
        for (std::uint64_t seed : {1u, 2u}) {
            const auto r = run_simulation(reference(m, seed, 3.0));
            EXPECT_LE(std::abs(r.mass_balance_residual()), 1e-9) << m << " seed " << seed;

            double event_sum = 0.0;
            for (const auto& e : r.events) event_sum += e.volume;
            EXPECT_TRUE(oracle::rel_close(event_sum, r.sum_pumped(), 1e-9)) << m;
        }
    }
}

TEST(Simulation, EventsAreWellFormed) {
    const auto r = run_simulation(reference("ABCD", 8, 3.0));
    const double rate = TankParams{}.pump_rate;
    std::vector<double> last_end(r.n_units, -1.0);
    for (const auto& e : r.events) {
        ASSERT_GT(e.t_end, e.t_start);
        ASSERT_GT(e.volume, 0.0);
        ASSERT_LE(e.volume, rate * (e.t_end - e.t_start) + 1e-9);
        ASSERT_GE(e.t_start, last_end[e.unit]) << "overlap for unit " << e.unit;
        last_end[e.unit] = e.t_end;
    }
}

TEST(Simulation, SlotExclusivity) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto r = run_simulation(reference("ABCD", seed, 3.0));
        const auto bad = testing::slot_violations(r);
        EXPECT_TRUE(bad.empty()) << bad.front();
    }
}

TEST(Simulation, LearningStaysInsideSlot) {
    auto cfg = reference("ABCD", 3, 10.0);
    cfg.control.pt_additional = 20.0;
    cfg.unit_scale_min = 0.1;
    cfg.unit_scale_max = 3.0;
    const auto r = run_simulation(cfg);
    for (const auto& s : r.learning_trace) {
        ASSERT_GE(r.t_base + s.t_pump_modif, 0.0);
        ASSERT_LE(r.t_base + s.t_pump_modif, r.schedule.slot_len);
    }
}

TEST(Simulation, NoOverflowWhenFailSafeCanKeepUp) {
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> weight(0.0, 3.0);
    std::uniform_real_distribution<double> daily(0.1, 1.5);
    std::uniform_int_distribution<int> pick(0, 4);
    const char* configs[] = {"A", "AB", "ABC", "ABD", "ABCD"};
    for (int trial = 0; trial < 20; ++trial) {
        auto cfg = reference(configs[pick(gen)], static_cast<std::uint64_t>(trial), 2.0);
        std::array<double, 24> raw{};
        for (auto& w : raw) w = weight(gen);
        cfg.profile.hourly_weights = InflowProfile::normalized(raw);
        cfg.profile.daily_mean = daily(gen);
        cfg.profile.noise_cv = 0.0;  // bounded per-step production
        const auto r = run_simulation(cfg);
        double max_step = 0.0;
        for (std::size_t u = 0; u < cfg.n_units; ++u)
            for (double w : cfg.profile.hourly_weights)
                max_step = std::max(max_step, cfg.profile.daily_mean * r.unit_scale[u] * w *
                                                  cfg.dt / 86400.0);
        ASSERT_LE(max_step, cfg.tank.pump_rate * cfg.dt);
        ASSERT_LE(cfg.tank.v_high + max_step, cfg.tank.capacity);
        EXPECT_TRUE(r.overflow_events.empty()) << "trial " << trial;
    }
}

TEST(Simulation, DecisionsInvariantUnderVolumeScaling) {
    auto base = reference("ABCD", 12, 3.0);
    auto scaled = base;
    const double k = 4.0;  // power of two keeps the scaling exact
    for (double* v : {&scaled.tank.capacity, &scaled.tank.v_dead, &scaled.tank.c_minus,
                      &scaled.tank.c_plus, &scaled.tank.v_warn, &scaled.tank.v_high,
                      &scaled.tank.v_off, &scaled.tank.pump_rate, &scaled.profile.daily_mean})
        *v *= k;
    const auto a = run_simulation(base);
    const auto b = run_simulation(scaled);
    ASSERT_EQ(a.events.size(), b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        EXPECT_EQ(a.events[i].unit, b.events[i].unit);
        EXPECT_EQ(a.events[i].t_start, b.events[i].t_start);
        EXPECT_EQ(a.events[i].t_end, b.events[i].t_end);
        EXPECT_EQ(a.events[i].source, b.events[i].source);
        EXPECT_EQ(a.events[i].volume * k, b.events[i].volume);
    }
}

TEST(Simulation, EmergentSlotDrawsOnlyOneSlotLength) {
    auto cfg = reference("ABC", 1, 1.0);
    cfg.tank.capacity = 3.0;
    cfg.tank.v_high = 2.5;
    World w(cfg);
    // Advance to the first emergent slot (index 9, t = 5400 s).
    while (w.time() < 5400.0) w.step();
    w.set_volume(0, 1.5);
    double drawn = 0.0;
    const double before = w.tank(0).volume;
    for (int i = 0; i < 60; ++i) w.step();
    const auto& partial = w.partial();
    for (const auto& e : partial.events)
        if (e.unit == 0 && e.source == PumpSource::EmergentSlot) drawn += e.volume;
    EXPECT_NEAR(drawn, cfg.tank.pump_rate * 600.0, 1e-12);
    EXPECT_GT(w.tank(0).volume, cfg.tank.v_warn);
    EXPECT_LT(w.tank(0).volume, before);
}

TEST(Simulation, FlagsCappedBasePumpTime) {
    auto cfg = reference("AB", 1, 1.0);
    cfg.profile.daily_mean = 10.0;
    cfg.tank.capacity = 20.0;
    cfg.tank.v_high = 15.0;
    const auto r = run_simulation(cfg);
    EXPECT_TRUE(r.t_base_capped);
    EXPECT_EQ(r.t_base, 600.0);
}

TEST(SimConfig, ValidationNamesField) {
    auto expect_field = [](SimConfig cfg, const char* field) {
        try {
            cfg.validate();
            ADD_FAILURE() << "expected failure on " << field;
        } catch (const ConfigError& e) {
            EXPECT_EQ(e.field(), field);
        }
    };
    auto cfg = reference("AB");
    cfg.control.schedule.slot_len = 700.0;
    expect_field(cfg, "control.slot_len");
    cfg = reference("AB");
    cfg.dt = 16.0;  // divides a day but not a slot
    expect_field(cfg, "control.slot_len");
    cfg = reference("AB");
    cfg.horizon_days = 0.5;
    expect_field(cfg, "horizon_days");
    cfg = reference("AD");
    expect_field(cfg, "control.enabled");
    cfg = reference("AB");
    cfg.profile.unit_scale = {1.0, 2.0};
    expect_field(cfg, "profile.unit_scale");
    cfg = reference("AB");
    cfg.n_units = 200;
    EXPECT_THROW(World{cfg}, ConfigError);
}

}  // namespace
}  // namespace psewer
