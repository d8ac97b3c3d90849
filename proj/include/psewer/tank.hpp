#pragma once

#include <string_view>

namespace psewer {

/// Volume thresholds of one septic tank. All volumes in m³, pump_rate in m³/s.
///
/// Ordering of the bands, bottom to top:
///   v_dead < c_minus < c_plus <= v_warn < v_high < capacity
/// with the fail-safe stop level v_off somewhere in [v_dead, v_warn].
struct TankParams {
    double capacity = 1.0;
    double v_dead = 0.05;    // pump cannot draw below this floor
    double c_minus = 0.10;   // learning lower limit
    double c_plus = 0.55;    // learning upper limit
    double v_warn = 0.55;    // emergent-slot eligibility
    double v_high = 0.85;    // on-off start level
    double v_off = 0.10;     // on-off stop level
    double pump_rate = 9e-4;

    /// Throws ConfigError naming the first violated field ("tank.<name>").
    void validate() const;
};

struct TankState {
    double volume = 0.0;
    bool pump_on = false;
    double overflow_total = 0.0;
};

enum class Zone { LowRed, Green, Orange, RedHigh };

std::string_view to_string(Zone zone) noexcept;

/// Band of Fig.-2 style classification; total and monotone in `volume`.
Zone zone_of(double volume, const TankParams& params) noexcept;

struct TankStepResult {
    TankState state;
    double pumped = 0.0;
    double overflowed = 0.0;
};

/// Advances the mass balance of one tank by `dt` seconds.
///
/// `pump_seconds` is how long the pump is commanded to run inside the step
/// (0 <= pump_seconds <= dt); the flag overload runs it for the whole step.
/// Pumping never draws the tank below `v_dead`; anything above `capacity` is
/// reported as overflow and accumulated in `overflow_total`.
TankStepResult tank_step(const TankState& state, const TankParams& params, double inflow,
                         double pump_seconds, double dt);

inline TankStepResult tank_step(const TankState& state, const TankParams& params,
                                double inflow, bool pump_on, double dt) {
    return tank_step(state, params, inflow, pump_on ? dt : 0.0, dt);
}

}  // namespace psewer
