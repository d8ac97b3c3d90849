#pragma once

#include <cstddef>
#include <vector>

#include "psewer/control.hpp"
#include "psewer/tank.hpp"

namespace psewer {

enum class Adjustment { None, Prolong, Shorten };

/// Per-unit memory of module D.
///
/// Between two evaluations a unit latches whether its level reached c_plus
/// and whether its own regular-slot pumping took it below c_minus. It also
/// accumulates what left the tank by other routes (fail-safe, emergent slot,
/// overflow), so that at evaluation time
///
///     net = volume_now - volume_at_last_evaluation + drawn_elsewhere
///
/// is the production the regular slots failed to remove during the period.
/// A latched limit only adjusts the pump time when `net` agrees with it:
/// prolong needs net > 0, shorten needs net <= 0. One evaluation makes at
/// most one step of size pt_additional.
class LearningState {
public:
    LearningState() = default;
    explicit LearningState(std::size_t n_units);

    std::size_t size() const noexcept { return modif_.size(); }

    double t_pump_modif(std::size_t unit) const noexcept { return modif_[unit]; }
    void set_t_pump_modif(std::size_t unit, double value) { modif_[unit] = value; }

    bool reached_high(std::size_t unit) const noexcept { return high_[unit] != 0; }
    bool fell_low(std::size_t unit) const noexcept { return low_[unit] != 0; }
    double drawn_elsewhere(std::size_t unit) const noexcept { return elsewhere_[unit]; }

    /// Starts a period for `unit` at the given level without adjusting.
    void begin(std::size_t unit, double volume);

    /// Records one simulation step of `unit` (post-step volume).
    void observe(std::size_t unit, double volume, PumpSource source, double pumped,
                 double overflowed, const TankParams& params);

    /// Net imbalance of the running period; requires begin() to have been called.
    double net_since_last(std::size_t unit, double volume) const;

    friend Adjustment learning_update(std::size_t unit, double volume, const TankParams& params,
                                      LearningState& learn, double pt_additional,
                                      double slot_len, double t_base);

private:
    std::vector<double> modif_;
    std::vector<unsigned char> high_;
    std::vector<unsigned char> low_;
    std::vector<unsigned char> has_sample_;
    std::vector<double> last_volume_;
    std::vector<double> elsewhere_;
};

/// End-of-period evaluation of module D for `unit`; applies at most one
/// +/- pt_additional step, keeps t_base + t_pump_modif within [0, slot_len],
/// and starts the next period.
Adjustment learning_update(std::size_t unit, double volume, const TankParams& params,
                           LearningState& learn, double pt_additional, double slot_len,
                           double t_base);

}  // namespace psewer
