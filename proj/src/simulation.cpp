#include "psewer/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "psewer/csv.hpp"
#include "psewer/error.hpp"
#include "psewer/rng.hpp"

namespace psewer {

namespace {

constexpr std::uint64_t kScaleSalt = 0x5CA1E;
constexpr std::uint64_t kFillSalt = 0xF111;

bool is_whole(double x) { return std::isfinite(x) && std::floor(x) == x; }

double neumaier_sum(std::span<const double> xs) {
    double sum = 0.0;
    double c = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

}  // namespace

std::size_t SimConfig::total_steps() const {
    return static_cast<std::size_t>(std::llround(horizon_days * kSecondsPerDay / dt));
}

void SimConfig::validate() const {
    if (n_units < 1) throw ConfigError("n_units", "must be >= 1");
    if (!(dt >= 1.0) || !is_whole(dt)) throw ConfigError("dt", "must be a whole number of seconds >= 1");
    if (!(horizon_days >= 1.0) || !std::isfinite(horizon_days))
        throw ConfigError("horizon_days", "must be >= 1 day");
    if (!is_whole(horizon_days * kSecondsPerDay / dt))
        throw ConfigError("horizon_days", "horizon must be a whole number of steps");
    tank.validate();
    if (initial_volume > tank.capacity || std::isnan(initial_volume))
        throw ConfigError("initial_volume", "must not exceed tank.capacity");
    profile.validate();
    if (!profile.unit_scale.empty() && profile.unit_scale.size() != n_units)
        throw ConfigError("profile.unit_scale", "needs exactly n_units entries");
    if (!(unit_scale_min >= 0.0) || !(unit_scale_max >= unit_scale_min) ||
        !std::isfinite(unit_scale_max))
        throw ConfigError("profile.unit_scale_max", "need 0 <= unit_scale_min <= unit_scale_max");
    const double slot_len = control.schedule.slot_len;
    if (!(slot_len > 0.0) || std::fmod(kSecondsPerDay, slot_len) != 0.0)
        throw ConfigError("control.slot_len", "must be positive and divide 86400 s");
    if (std::fmod(slot_len, dt) != 0.0)
        throw ConfigError("control.slot_len", "must be a multiple of dt");
    control.validate();
}

std::string SimConfig::scenario_key() const {
    std::ostringstream os;
    os << "n_units=" << n_units << '\n'
       << "horizon_days=" << format_double(horizon_days) << '\n'
       << "dt=" << format_double(dt) << '\n'
       << "seed=" << seed << '\n'
       << "initial_volume=" << format_double(initial_volume) << '\n';
    const auto& t = tank;
    for (auto [k, v] : {std::pair{"capacity", t.capacity}, {"v_dead", t.v_dead},
                        {"c_minus", t.c_minus}, {"c_plus", t.c_plus}, {"v_warn", t.v_warn},
                        {"v_high", t.v_high}, {"v_off", t.v_off}, {"pump_rate", t.pump_rate}})
        os << "tank." << k << '=' << format_double(v) << '\n';
    os << "profile.daily_mean=" << format_double(profile.daily_mean) << '\n'
       << "profile.noise_cv=" << format_double(profile.noise_cv) << '\n'
       << "profile.hourly_weights=";
    for (double w : profile.hourly_weights) os << format_double(w) << ',';
    os << "\nprofile.unit_scale=";
    for (double s : profile.unit_scale) os << format_double(s) << ',';
    os << "\nprofile.unit_scale_min=" << format_double(unit_scale_min) << '\n'
       << "profile.unit_scale_max=" << format_double(unit_scale_max) << '\n'
       << "control.t_base=" << format_double(control.t_base) << '\n'
       << "control.pt_additional=" << format_double(control.pt_additional) << '\n'
       << "control.learn_period=" << format_double(control.learn_period) << '\n'
       << "control.slot_len=" << format_double(control.schedule.slot_len) << '\n'
       << "control.emergent_period=" << control.schedule.emergent_period << '\n';
    return os.str();
}

double SimResult::sum_inflow() const { return neumaier_sum(total_inflow); }

double SimResult::sum_pumped() const { return neumaier_sum(aggregate_outflow); }

double SimResult::sum_overflow() const {
    std::vector<double> v;
    v.reserve(overflow_events.size());
    for (const auto& e : overflow_events) v.push_back(e.volume);
    return neumaier_sum(v);
}

double SimResult::sum_storage_change() const {
    std::vector<double> v;
    v.reserve(2 * final_states.size());
    for (std::size_t u = 0; u < final_states.size(); ++u) {
        v.push_back(final_states[u].volume);
        v.push_back(-initial_volume[u]);
    }
    return neumaier_sum(v);
}

double SimResult::mass_balance_residual() const {
    const double in = sum_inflow();
    const double residual = in - sum_pumped() - sum_overflow() - sum_storage_change();
    return in > 0.0 ? residual / in : residual;
}

World::World(SimConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    const std::size_t n = cfg_.n_units;

    control_ = cfg_.control;
    control_.schedule = build_schedule(n, cfg_.control.schedule.slot_len,
                                       cfg_.control.schedule.emergent_period, cfg_.seed);

    if (cfg_.profile.unit_scale.empty()) {
        SplitMix64 rng(hash_key(cfg_.seed, kScaleSalt, n));
        cfg_.profile.unit_scale.resize(n);
        for (auto& s : cfg_.profile.unit_scale)
            s = cfg_.unit_scale_min + (cfg_.unit_scale_max - cfg_.unit_scale_min) * rng.uniform();
    }

    bool capped = false;
    if (!(control_.t_base > 0.0)) {
        if (cfg_.profile.daily_mean > 0.0) {
            const auto base =
                base_pump_time(cfg_.profile.daily_mean, cfg_.tank.pump_rate,
                               control_.schedule.mean_slots_per_unit(n), control_.schedule.slot_len);
            control_.t_base = base.seconds;
            capped = base.capped;
        } else {
            control_.t_base = 0.0;  // nothing to drain
        }
    }

    learn_ = LearningState(n);
    units_.resize(n);
    natural_order_.resize(n);
    std::iota(natural_order_.begin(), natural_order_.end(), std::size_t{0});

    SplitMix64 fill_rng(hash_key(cfg_.seed, kFillSalt, n));
    result_.initial_volume.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        const double draw = fill_rng.uniform();
        const double v0 = cfg_.initial_volume >= 0.0
                              ? cfg_.initial_volume
                              : cfg_.tank.c_minus + (cfg_.tank.c_plus - cfg_.tank.c_minus) * draw;
        units_[u].tank.volume = v0;
        result_.initial_volume[u] = v0;
        learn_.begin(u, v0);
    }

    total_steps_ = cfg_.total_steps();
    result_.label = cfg_.label;
    result_.modules = control_.enabled;
    result_.scenario_key = cfg_.scenario_key();
    result_.dt = cfg_.dt;
    result_.n_units = n;
    result_.t_base = control_.t_base;
    result_.t_base_capped = capped;
    result_.schedule = control_.schedule;
    result_.unit_scale = cfg_.profile.unit_scale;
    result_.aggregate_outflow.reserve(total_steps_);
    result_.total_inflow.assign(n, 0.0);

    if (control_.enabled.d) trace_learning(0.0);
}

void World::set_volume(std::size_t unit, double volume) {
    auto& u = units_.at(unit);
    volume = std::clamp(volume, 0.0, cfg_.tank.capacity);
    result_.initial_volume[unit] += volume - u.tank.volume;
    u.tank.volume = volume;
    learn_.begin(unit, volume);
}

void World::trace_learning(double t) {
    for (std::size_t u = 0; u < cfg_.n_units; ++u)
        result_.learning_trace.push_back({t, u, learn_.t_pump_modif(u)});
}

void World::evaluate_learning(double t) {
    for (std::size_t u = 0; u < cfg_.n_units; ++u)
        learning_update(u, units_[u].tank.volume, cfg_.tank, learn_, control_.pt_additional,
                        control_.schedule.slot_len, control_.t_base);
    trace_learning(t);
}

void World::step() { step(natural_order_); }

void World::step(std::span<const std::size_t> order) {
    if (done()) throw std::logic_error("World::step: horizon reached");
    if (order.size() != cfg_.n_units) throw std::invalid_argument("World::step: bad visit order");

    const double t = time();
    const double dt = cfg_.dt;
    if (control_.enabled.d && step_ > 0 && std::fmod(t, control_.learn_period) == 0.0)
        evaluate_learning(t);

    const SlotInfo slot = slot_at(control_.schedule, t);
    const TankParams& params = cfg_.tank;

    for (std::size_t k : order) {
        Unit& u = units_.at(k);
        const double inflow = inflow_at(cfg_.profile, k, t, dt, cfg_.seed);
        u.inflow_total += inflow;

        const bool was_failsafe = u.cmd.run && u.cmd.source == PumpSource::FailSafe;
        u.cmd = compose_decide(k, u.tank.volume, params, control_, learn_, slot, u.cmd,
                               was_failsafe);

        double pump_seconds = 0.0;
        if (u.cmd.run)
            pump_seconds = u.cmd.source == PumpSource::FailSafe ? dt : std::min(dt, u.cmd.budget);

        const TankStepResult r = tank_step(u.tank, params, inflow, pump_seconds, dt);
        u.tank = r.state;
        u.step_pumped = r.pumped;

        if (u.cmd.source == PumpSource::RegularSlot || u.cmd.source == PumpSource::EmergentSlot) {
            u.cmd.budget -= pump_seconds;
            if (u.cmd.budget <= 0.0) {
                u.cmd.budget = 0.0;
                u.cmd.run = false;
            }
        }

        if (r.pumped > 0.0) {
            const bool floor_limited = r.pumped < params.pump_rate * pump_seconds;
            const double duration = floor_limited ? r.pumped / params.pump_rate : pump_seconds;
            bool extend = false;
            if (u.has_open_event && u.pumped_last_step) {
                const DrawEvent& open = result_.events[u.open_event];
                extend = open.source == u.cmd.source &&
                         (u.cmd.source == PumpSource::FailSafe ||
                          slot_at(control_.schedule, open.t_start).serial == slot.serial);
            }
            if (extend) {
                DrawEvent& open = result_.events[u.open_event];
                open.t_end = t + duration;
                open.volume += r.pumped;
            } else {
                u.open_event = result_.events.size();
                u.has_open_event = true;
                result_.events.push_back({k, t, t + duration, r.pumped, u.cmd.source});
            }
        }
        u.pumped_last_step = r.pumped > 0.0;

        if (r.overflowed > 0.0) result_.overflow_events.push_back({k, t, r.overflowed});

        if (control_.enabled.d)
            learn_.observe(k, u.tank.volume, u.cmd.source, r.pumped, r.overflowed, params);
    }

    // Fixed summation order keeps the aggregate independent of the visit order.
    double total = 0.0;
    for (const Unit& u : units_) total += u.step_pumped;
    result_.aggregate_outflow.push_back(total);
    ++step_;
}

SimResult World::finish() && {
    while (!done()) step();
    if (control_.enabled.d) trace_learning(time());

    for (std::size_t u = 0; u < cfg_.n_units; ++u) result_.total_inflow[u] = units_[u].inflow_total;
    result_.final_states.reserve(cfg_.n_units);
    for (const Unit& u : units_) result_.final_states.push_back(u.tank);

    auto by_time_unit = [](const auto& a, const auto& b) {
        if (a.t_start != b.t_start) return a.t_start < b.t_start;
        return a.unit < b.unit;
    };
    std::sort(result_.events.begin(), result_.events.end(), by_time_unit);
    std::sort(result_.overflow_events.begin(), result_.overflow_events.end(),
              [](const OverflowEvent& a, const OverflowEvent& b) {
                  return a.t != b.t ? a.t < b.t : a.unit < b.unit;
              });
    return std::move(result_);
}

SimResult run_simulation(const SimConfig& cfg) { return World(cfg).finish(); }

}  // namespace psewer
