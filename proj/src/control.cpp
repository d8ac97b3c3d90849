#include "psewer/control.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "psewer/error.hpp"
#include "psewer/learning.hpp"

namespace psewer {

ModuleSet ModuleSet::parse(std::string_view label) {
    ModuleSet m{false, false, false, false};
    if (label.empty()) throw ConfigError("control.enabled", "empty module list");
    for (char ch : label) {
        switch (std::toupper(static_cast<unsigned char>(ch))) {
            case 'A': m.a = true; break;
            case 'B': m.b = true; break;
            case 'C': m.c = true; break;
            case 'D': m.d = true; break;
            default:
                throw ConfigError("control.enabled",
                                  std::string("unknown module '") + ch + "' (expected A-D)");
        }
    }
    return m;
}

std::string ModuleSet::label() const {
    std::string s;
    if (a) s += 'A';
    if (b) s += 'B';
    if (c) s += 'C';
    if (d) s += 'D';
    return s;
}

void ControlConfig::validate() const {
    if (!enabled.a) throw ConfigError("control.enabled", "module A (fail-safe) is mandatory");
    if (enabled.c && !enabled.b)
        throw ConfigError("control.enabled", "module C requires module B");
    if (enabled.d && !enabled.b)
        throw ConfigError("control.enabled", "module D requires module B");
    if (!(pt_additional >= 0.0) || !std::isfinite(pt_additional))
        throw ConfigError("control.pt_additional", "must be finite and >= 0");
    if (!std::isfinite(t_base) || t_base > schedule.slot_len)
        throw ConfigError("control.t_base", "must not exceed control.slot_len");
    if (!(learn_period > 0.0) || std::fmod(learn_period, schedule.slot_len) != 0.0)
        throw ConfigError("control.learn_period", "must be a positive multiple of slot_len");
}

std::string_view to_string(PumpSource source) noexcept {
    switch (source) {
        case PumpSource::Idle: return "Idle";
        case PumpSource::FailSafe: return "FailSafe";
        case PumpSource::RegularSlot: return "RegularSlot";
        case PumpSource::EmergentSlot: return "EmergentSlot";
    }
    return "?";
}

bool on_off_decide(double volume, const TankParams& params, bool was_failsafe_on) noexcept {
    if (volume >= params.v_high) return true;
    if (volume <= params.v_off) return false;
    return was_failsafe_on;
}

BasePumpTime base_pump_time(double daily_mean, double pump_rate, double slots_per_unit,
                            double slot_len) {
    if (!(daily_mean > 0.0) || !(pump_rate > 0.0) || !(slots_per_unit > 0.0) ||
        !(slot_len > 0.0))
        throw ConfigError("control.t_base",
                          "base pump time needs positive daily_mean, pump_rate and slot count");
    BasePumpTime out;
    out.seconds = daily_mean / (pump_rate * slots_per_unit);
    if (!(out.seconds > 0.0) || !std::isfinite(out.seconds))
        throw ConfigError("control.t_base", "mass balance gives a non-positive pump time");
    if (out.seconds > slot_len) {
        out.seconds = slot_len;
        out.capped = true;
    }
    return out;
}

double regular_budget(std::size_t unit, const ControlConfig& cfg, const LearningState& learn) {
    const double modif = cfg.enabled.d && unit < learn.size() ? learn.t_pump_modif(unit) : 0.0;
    return std::clamp(cfg.t_base + modif, 0.0, cfg.schedule.slot_len);
}

PumpCommand slot_decide(std::size_t unit, double volume, const TankParams& params,
                        const ControlConfig& cfg, const LearningState& learn,
                        const SlotInfo& slot) {
    if (!cfg.enabled.b || slot.kind != SlotKind::Regular ||
        slot.owner != static_cast<int>(unit) || !slot.at_entry())
        return PumpCommand::idle();
    if (volume <= params.v_dead) return PumpCommand::idle();
    const double budget = regular_budget(unit, cfg, learn);
    if (budget <= 0.0) return PumpCommand::idle();
    return {true, budget, PumpSource::RegularSlot, slot.serial};
}

PumpCommand emergent_decide(double volume, const TankParams& params, const ControlConfig& cfg,
                            const SlotInfo& slot) {
    if (!cfg.enabled.c || slot.kind != SlotKind::Emergent || !slot.at_entry())
        return PumpCommand::idle();
    if (volume < params.v_warn) return PumpCommand::idle();
    return {true, cfg.schedule.slot_len, PumpSource::EmergentSlot, slot.serial};
}

PumpCommand compose_decide(std::size_t unit, double volume, const TankParams& params,
                           const ControlConfig& cfg, const LearningState& learn,
                           const SlotInfo& slot, const PumpCommand& prior,
                           bool was_failsafe_on) {
    if (on_off_decide(volume, params, was_failsafe_on)) return PumpCommand::fail_safe();
    if (volume <= params.v_dead) return PumpCommand::idle();

    if (slot.at_entry()) {
        if (slot.kind == SlotKind::Emergent) return emergent_decide(volume, params, cfg, slot);
        return slot_decide(unit, volume, params, cfg, learn, slot);
    }

    const bool slot_driven = prior.source == PumpSource::RegularSlot ||
                             prior.source == PumpSource::EmergentSlot;
    if (prior.run && slot_driven && prior.slot_serial == slot.serial && prior.budget > 0.0)
        return prior;
    return PumpCommand::idle();
}

}  // namespace psewer
