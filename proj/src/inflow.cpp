#include "psewer/inflow.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "psewer/error.hpp"
#include "psewer/rng.hpp"

namespace psewer {

namespace {

constexpr std::uint64_t kInflowSalt = 0x1F10'77A5'0000'0001ULL;

std::size_t hour_of(double t) {
    const double in_day = std::fmod(t, 86400.0);
    return static_cast<std::size_t>(in_day / 3600.0) % 24;
}

}  // namespace

std::array<double, 24> InflowProfile::default_hourly_weights() {
    // Night trough, a morning peak around 07:00 and a stronger evening peak
    // around 19:00.
    constexpr std::array<double, 24> shape{
        0.30, 0.20, 0.20, 0.20, 0.30, 0.60,   // 00-05
        1.50, 2.00, 1.60, 1.20,               // 06-09
        0.90, 0.90, 1.00, 1.00, 0.90, 0.90, 1.00,  // 10-16
        1.40, 1.80, 2.20, 2.00, 1.50, 1.00,   // 17-22
        0.60};                                // 23
    return normalized(shape);
}

std::array<double, 24> InflowProfile::flat_hourly_weights() {
    std::array<double, 24> w{};
    w.fill(1.0);
    return w;
}

std::array<double, 24> InflowProfile::normalized(const std::array<double, 24>& raw) {
    double sum = 0.0;
    for (double w : raw) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ConfigError("profile.hourly_weights", "weights must be finite and >= 0");
        sum += w;
    }
    if (!(sum > 0.0)) throw ConfigError("profile.hourly_weights", "weights must not all be zero");
    // Already-normalized input is kept bit-for-bit so that written scenarios read back unchanged.
    if (std::abs(sum - 24.0) <= 1e-12) return raw;
    std::array<double, 24> out{};
    for (std::size_t h = 0; h < 24; ++h) out[h] = raw[h] * 24.0 / sum;
    return out;
}

void InflowProfile::validate() const {
    if (!(daily_mean >= 0.0) || !std::isfinite(daily_mean))
        throw ConfigError("profile.daily_mean", "must be finite and >= 0");
    double sum = 0.0;
    for (double w : hourly_weights) {
        if (!(w >= 0.0)) throw ConfigError("profile.hourly_weights", "weights must be >= 0");
        sum += w;
    }
    if (std::abs(sum - 24.0) > 1e-9)
        throw ConfigError("profile.hourly_weights", "weights must sum to 24");
    if (!(noise_cv >= 0.0) || !std::isfinite(noise_cv))
        throw ConfigError("profile.noise_cv", "must be finite and >= 0");
    for (double s : unit_scale)
        if (!(s >= 0.0) || !std::isfinite(s))
            throw ConfigError("profile.unit_scale", "scales must be finite and >= 0");
}

double expected_inflow(const InflowProfile& profile, std::size_t unit, double t, double dt) {
    return profile.daily_mean * profile.scale_of(unit) * profile.hourly_weights[hour_of(t)] *
           dt / 86400.0;
}

double lognormal_multiplier(double cv, double u1, double u2) {
    if (cv <= 0.0) return 1.0;
    const double sigma2 = std::log1p(cv * cv);
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return std::exp(std::sqrt(sigma2) * z - 0.5 * sigma2);
}

double inflow_at(const InflowProfile& profile, std::size_t unit, double t, double dt,
                 std::uint64_t seed) {
    const double mean = expected_inflow(profile, unit, t, dt);
    if (mean == 0.0 || profile.noise_cv <= 0.0) return mean;
    const auto step = static_cast<std::uint64_t>(std::llround(t / dt));
    const std::uint64_t k1 = hash_key(seed, unit, step, kInflowSalt);
    const std::uint64_t k2 = splitmix64(k1);
    return mean * lognormal_multiplier(profile.noise_cv, to_unit_open(k1), to_unit_open(k2));
}

}  // namespace psewer
