#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace psewer {

/// Effluent production model: a piecewise-constant hourly intensity profile
/// times mean-one log-normal noise, scaled per unit.
struct InflowProfile {
    double daily_mean = 0.54;  // m³/day for a unit with scale 1
    std::array<double, 24> hourly_weights = default_hourly_weights();
    double noise_cv = 0.3;
    std::vector<double> unit_scale;  // one entry per unit; empty means all 1.0

    /// Morning and evening peaks, the evening one higher; sums to 24.
    static std::array<double, 24> default_hourly_weights();
    static std::array<double, 24> flat_hourly_weights();

    /// Rescales `raw` so it sums to 24. Throws ConfigError on negative or all-zero input.
    static std::array<double, 24> normalized(const std::array<double, 24>& raw);

    double scale_of(std::size_t unit) const noexcept {
        return unit < unit_scale.size() ? unit_scale[unit] : 1.0;
    }

    void validate() const;
};

/// Expected production of `unit` over the step starting at `t` (no noise).
double expected_inflow(const InflowProfile& profile, std::size_t unit, double t, double dt);

/// Production of `unit` over the step [t, t + dt). A pure function of
/// (seed, unit, step index, profile).
double inflow_at(const InflowProfile& profile, std::size_t unit, double t, double dt,
                 std::uint64_t seed);

/// Mean-one log-normal multiplier with coefficient of variation `cv`, driven
/// by two independent uniforms in (0, 1).
double lognormal_multiplier(double cv, double u1, double u2);

}  // namespace psewer
