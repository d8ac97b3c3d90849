#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "psewer/control.hpp"
#include "psewer/inflow.hpp"
#include "psewer/learning.hpp"
#include "psewer/schedule.hpp"
#include "psewer/tank.hpp"

namespace psewer {

struct SimConfig {
    std::string label = "run";
    std::size_t n_units = 12;
    double horizon_days = 10.0;
    double dt = 10.0;  // s, whole seconds
    std::uint64_t seed = 1;

    TankParams tank;
    /// Starting volume of every tank; negative draws each one uniformly from
    /// [c_minus, c_plus].
    double initial_volume = -1.0;

    InflowProfile profile;
    /// Range of the per-unit production multiplier when profile.unit_scale is empty.
    double unit_scale_min = 0.5;
    double unit_scale_max = 1.5;

    /// schedule.slot_len and schedule.emergent_period are read from here;
    /// the slot ownership is built by the simulation from `seed`.
    ControlConfig control;

    std::size_t total_steps() const;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;

    /// Canonical text of every scenario input except the module selection and
    /// the label. Runs that share it are comparable.
    std::string scenario_key() const;
};

struct DrawEvent {
    std::size_t unit = 0;
    double t_start = 0.0;
    double t_end = 0.0;
    double volume = 0.0;
    PumpSource source = PumpSource::Idle;
};

struct OverflowEvent {
    std::size_t unit = 0;
    double t = 0.0;
    double volume = 0.0;
};

struct LearningSample {
    double t = 0.0;
    std::size_t unit = 0;
    double t_pump_modif = 0.0;
};

struct SimResult {
    std::string label;
    ModuleSet modules;
    std::string scenario_key;
    double dt = 0.0;
    std::size_t n_units = 0;
    double t_base = 0.0;
    bool t_base_capped = false;
    SlotSchedule schedule;
    std::vector<double> unit_scale;

    std::vector<DrawEvent> events;            // sorted by (t_start, unit)
    std::vector<double> aggregate_outflow;    // m³ pumped by all units, per step
    std::vector<LearningSample> learning_trace;
    std::vector<OverflowEvent> overflow_events;

    std::vector<double> initial_volume;
    std::vector<double> total_inflow;         // per unit, over the horizon
    std::vector<TankState> final_states;

    double sum_inflow() const;
    double sum_pumped() const;
    double sum_overflow() const;
    double sum_storage_change() const;
    /// inflow - pumped - overflow - storage change, relative to total inflow
    /// (absolute when there was no inflow).
    double mass_balance_residual() const;
};

/// Mutable simulation state: the fixed-step loop over all units.
class World {
public:
    explicit World(SimConfig cfg);

    const SimConfig& config() const noexcept { return cfg_; }
    const ControlConfig& control() const noexcept { return control_; }
    const LearningState& learning() const noexcept { return learn_; }
    const TankState& tank(std::size_t unit) const { return units_.at(unit).tank; }
    const PumpCommand& command(std::size_t unit) const { return units_.at(unit).cmd; }

    /// Overrides a tank level. Intended for scenario set-up in tests; the
    /// change is booked as a storage offset so mass balance stays closed.
    void set_volume(std::size_t unit, double volume);

    std::size_t step_index() const noexcept { return step_; }
    double time() const noexcept { return static_cast<double>(step_) * cfg_.dt; }
    bool done() const noexcept { return step_ >= total_steps_; }

    /// Advances every unit by one dt, visiting them in `order` (a permutation
    /// of unit indices). The result does not depend on the order.
    void step(std::span<const std::size_t> order);
    void step();

    /// Runs to the horizon and returns the collected result.
    SimResult finish() &&;

    const SimResult& partial() const noexcept { return result_; }

private:
    struct Unit {
        TankState tank;
        PumpCommand cmd;
        double inflow_total = 0.0;
        double step_pumped = 0.0;
        bool pumped_last_step = false;
        std::size_t open_event = 0;
        bool has_open_event = false;
    };

    void evaluate_learning(double t);
    void trace_learning(double t);

    SimConfig cfg_;
    ControlConfig control_;
    LearningState learn_;
    std::vector<Unit> units_;
    std::vector<std::size_t> natural_order_;
    std::size_t step_ = 0;
    std::size_t total_steps_ = 0;
    SimResult result_;
};

/// Convenience: World(cfg) stepped to the horizon.
SimResult run_simulation(const SimConfig& cfg);

}  // namespace psewer
