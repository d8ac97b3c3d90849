#include "psewer/learning.hpp"

#include <algorithm>
#include <stdexcept>

namespace psewer {

LearningState::LearningState(std::size_t n_units)
    : modif_(n_units, 0.0),
      high_(n_units, 0),
      low_(n_units, 0),
      has_sample_(n_units, 0),
      last_volume_(n_units, 0.0),
      elsewhere_(n_units, 0.0) {}

void LearningState::begin(std::size_t unit, double volume) {
    high_[unit] = 0;
    low_[unit] = 0;
    elsewhere_[unit] = 0.0;
    last_volume_[unit] = volume;
    has_sample_[unit] = 1;
}

void LearningState::observe(std::size_t unit, double volume, PumpSource source, double pumped,
                            double overflowed, const TankParams& params) {
    if (volume >= params.c_plus) high_[unit] = 1;
    if (source == PumpSource::RegularSlot && pumped > 0.0 && volume < params.c_minus)
        low_[unit] = 1;
    if (source == PumpSource::FailSafe || source == PumpSource::EmergentSlot)
        elsewhere_[unit] += pumped;
    elsewhere_[unit] += overflowed;
}

double LearningState::net_since_last(std::size_t unit, double volume) const {
    if (!has_sample_[unit]) throw std::logic_error("LearningState: period not started");
    return volume - last_volume_[unit] + elsewhere_[unit];
}

Adjustment learning_update(std::size_t unit, double volume, const TankParams& params,
                           LearningState& learn, double pt_additional, double slot_len,
                           double t_base) {
    // Without a previous sample the trend is unknown; let the latches decide.
    const bool known = learn.has_sample_[unit] != 0;
    const double net = known ? learn.net_since_last(unit, volume) : 0.0;
    const double eps = 1e-9 * params.capacity;

    Adjustment adj = Adjustment::None;
    if (learn.high_[unit] && (!known || net > eps)) {
        learn.modif_[unit] += pt_additional;
        adj = Adjustment::Prolong;
    } else if (learn.low_[unit] && (!known || net <= eps)) {
        learn.modif_[unit] -= pt_additional;
        adj = Adjustment::Shorten;
    }
    learn.modif_[unit] = std::clamp(learn.modif_[unit], -t_base, slot_len - t_base);
    learn.begin(unit, volume);
    return adj;
}

}  // namespace psewer
