#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "psewer/schedule.hpp"
#include "psewer/tank.hpp"

namespace psewer {

class LearningState;

/// Enabled control modules:
///   A  on-off fail-safe        B  regular time slots
///   C  emergent time slot      D  pump-time learning
struct ModuleSet {
    bool a = true;
    bool b = false;
    bool c = false;
    bool d = false;

    /// Parses a label such as "ABD" (letters in any order, case-insensitive).
    static ModuleSet parse(std::string_view label);
    /// Canonical label, letters in A-B-C-D order.
    std::string label() const;

    friend bool operator==(const ModuleSet&, const ModuleSet&) = default;
};

struct ControlConfig {
    ModuleSet enabled;
    double t_base = 0.0;          // s; <= 0 means derive it from the mass balance
    double pt_additional = 10.0;  // s
    double learn_period = kSecondsPerDay;
    SlotSchedule schedule;

    /// Rejects configurations without A, and C or D without B.
    void validate() const;
};

enum class PumpSource { Idle, FailSafe, RegularSlot, EmergentSlot };

std::string_view to_string(PumpSource source) noexcept;

struct PumpCommand {
    bool run = false;
    double budget = 0.0;  // s of pumping left in the current slot
    PumpSource source = PumpSource::Idle;
    std::uint64_t slot_serial = 0;

    static PumpCommand idle() noexcept { return {}; }
    static PumpCommand fail_safe() noexcept { return {true, 0.0, PumpSource::FailSafe, 0}; }
};

/// Two-sensor hysteresis: on at or above v_high, off at or below v_off,
/// otherwise hold.
bool on_off_decide(double volume, const TankParams& params, bool was_failsafe_on) noexcept;

struct BasePumpTime {
    double seconds = 0.0;
    bool capped = false;  // mass balance asked for more than one slot
};

/// Pump time per regular slot that drains the mean daily production:
/// daily_mean / (pump_rate * slots_per_unit), capped at slot_len.
BasePumpTime base_pump_time(double daily_mean, double pump_rate, double slots_per_unit,
                            double slot_len);

/// Regular-slot budget of `unit`: t_base plus its learned correction (when D
/// is enabled), clamped to [0, slot_len].
double regular_budget(std::size_t unit, const ControlConfig& cfg, const LearningState& learn);

/// Module B at the entry of a slot owned by `unit`.
PumpCommand slot_decide(std::size_t unit, double volume, const TankParams& params,
                        const ControlConfig& cfg, const LearningState& learn,
                        const SlotInfo& slot);

/// Module C at the entry of an emergent slot: any unit at or above v_warn may
/// draw for up to one slot length.
PumpCommand emergent_decide(double volume, const TankParams& params, const ControlConfig& cfg,
                            const SlotInfo& slot);

/// Priority composition of the modules into one command for one step:
/// fail-safe, then emergent slot, then own regular slot, then the in-flight
/// budget of the current slot. Module D never commands the pump.
PumpCommand compose_decide(std::size_t unit, double volume, const TankParams& params,
                           const ControlConfig& cfg, const LearningState& learn,
                           const SlotInfo& slot, const PumpCommand& prior,
                           bool was_failsafe_on);

}  // namespace psewer
