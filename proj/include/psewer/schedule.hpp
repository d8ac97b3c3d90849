#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace psewer {

inline constexpr double kSecondsPerDay = 86400.0;

/// Daily allocation of time slots. Regular slots belong to exactly one unit;
/// every `emergent_period`-th slot is shared by all units above the warning
/// level. The pattern repeats every day.
struct SlotSchedule {
    static constexpr int kEmergent = -1;

    double slot_len = 600.0;
    int emergent_period = 10;  // 0 disables emergent slots
    std::vector<int> owner;    // per slot index; kEmergent for emergent slots

    std::size_t slots_per_day() const noexcept { return owner.size(); }
    bool is_emergent(std::size_t slot) const noexcept {
        return owner[slot % owner.size()] == kEmergent;
    }
    std::size_t regular_slots() const noexcept;
    std::size_t emergent_slots() const noexcept { return slots_per_day() - regular_slots(); }
    /// Number of regular slots owned by `unit` per day.
    std::size_t slots_of(std::size_t unit) const noexcept;
    /// Regular slots per unit per day, averaged over `n_units`.
    double mean_slots_per_unit(std::size_t n_units) const noexcept {
        return static_cast<double>(regular_slots()) / static_cast<double>(n_units);
    }
};

/// Whether slot index `slot` is an emergent one under period `period`.
constexpr bool is_emergent_index(std::size_t slot, int period) noexcept {
    return period > 0 && slot % static_cast<std::size_t>(period) ==
                             static_cast<std::size_t>(period - 1);
}

/// Assigns regular slots round-robin over a seeded permutation of the units,
/// so per-unit counts differ by at most one. Throws ConfigError when the day
/// has fewer regular slots than units.
SlotSchedule build_schedule(std::size_t n_units, double slot_len, int emergent_period,
                            std::uint64_t seed);

enum class SlotKind { Regular, Emergent };

struct SlotInfo {
    std::size_t index = 0;       // slot within the day
    std::uint64_t serial = 0;    // slot count since t = 0
    SlotKind kind = SlotKind::Regular;
    int owner = SlotSchedule::kEmergent;
    double t_into_slot = 0.0;

    bool at_entry() const noexcept { return t_into_slot == 0.0; }
};

SlotInfo slot_at(const SlotSchedule& schedule, double t);

}  // namespace psewer
