#include "psewer/tank.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "psewer/error.hpp"

namespace psewer {

namespace {

void require(bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(std::string("tank.") + field, what);
}

}  // namespace

void TankParams::validate() const {
    require(std::isfinite(capacity) && capacity > 0.0, "capacity", "must be a positive volume");
    require(std::isfinite(v_dead) && v_dead >= 0.0, "v_dead", "must be >= 0");
    require(c_minus > v_dead, "c_minus", "must exceed v_dead");
    require(c_plus > c_minus, "c_plus", "must exceed c_minus");
    require(v_warn >= c_plus, "v_warn", "must be >= c_plus");
    require(v_high > v_warn, "v_high", "must exceed v_warn");
    require(capacity > v_high, "capacity", "must exceed v_high");
    require(v_off >= v_dead && v_off <= v_warn, "v_off", "must lie in [v_dead, v_warn]");
    require(std::isfinite(pump_rate) && pump_rate > 0.0, "pump_rate", "must be > 0");
}

std::string_view to_string(Zone zone) noexcept {
    switch (zone) {
        case Zone::LowRed: return "LowRed";
        case Zone::Green: return "Green";
        case Zone::Orange: return "Orange";
        case Zone::RedHigh: return "RedHigh";
    }
    return "?";
}

Zone zone_of(double volume, const TankParams& params) noexcept {
    if (volume >= params.v_high) return Zone::RedHigh;
    if (volume >= params.v_warn) return Zone::Orange;
    if (volume < params.c_minus) return Zone::LowRed;
    return Zone::Green;
}

TankStepResult tank_step(const TankState& state, const TankParams& params, double inflow,
                         double pump_seconds, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("tank_step: dt must be > 0");
    if (!(inflow >= 0.0)) throw std::invalid_argument("tank_step: inflow must be >= 0");
    pump_seconds = std::clamp(pump_seconds, 0.0, dt);

    TankStepResult out;
    const double pumpable = std::max(0.0, state.volume - params.v_dead);
    out.pumped = pump_seconds > 0.0 ? std::min(params.pump_rate * pump_seconds, pumpable) : 0.0;

    const double raw = state.volume + inflow - out.pumped;
    out.overflowed = std::max(0.0, raw - params.capacity);
    out.state.volume = std::clamp(raw, 0.0, params.capacity);
    out.state.pump_on = out.pumped > 0.0;
    out.state.overflow_total = state.overflow_total + out.overflowed;
    return out;
}

}  // namespace psewer
