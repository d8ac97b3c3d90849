#include "psewer/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "psewer/error.hpp"
#include "psewer/rng.hpp"

namespace psewer {

std::size_t SlotSchedule::regular_slots() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(owner.begin(), owner.end(), [](int o) { return o != kEmergent; }));
}

std::size_t SlotSchedule::slots_of(std::size_t unit) const noexcept {
    return static_cast<std::size_t>(std::count(owner.begin(), owner.end(), static_cast<int>(unit)));
}

SlotSchedule build_schedule(std::size_t n_units, double slot_len, int emergent_period,
                            std::uint64_t seed) {
    if (n_units < 1) throw ConfigError("n_units", "must be >= 1");
    if (!(slot_len > 0.0) || std::fmod(kSecondsPerDay, slot_len) != 0.0)
        throw ConfigError("control.slot_len", "must be positive and divide 86400 s");
    if (emergent_period < 0)
        throw ConfigError("control.emergent_period", "must be >= 0 (0 disables emergent slots)");

    const auto per_day = static_cast<std::size_t>(kSecondsPerDay / slot_len);
    std::size_t regular = 0;
    for (std::size_t s = 0; s < per_day; ++s)
        if (!is_emergent_index(s, emergent_period)) ++regular;
    if (regular < n_units)
        throw ConfigError("control.slot_len",
                          "only " + std::to_string(regular) + " regular slots per day for " +
                              std::to_string(n_units) + " units");

    // Fisher-Yates with our own generator: std::shuffle is not portable
    // across standard libraries.
    std::vector<int> perm(n_units);
    std::iota(perm.begin(), perm.end(), 0);
    SplitMix64 rng(hash_key(seed, 0x5C4EDu, n_units));
    for (std::size_t i = n_units; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);

    SlotSchedule out;
    out.slot_len = slot_len;
    out.emergent_period = emergent_period;
    out.owner.resize(per_day);
    std::size_t next = 0;
    for (std::size_t s = 0; s < per_day; ++s) {
        if (is_emergent_index(s, emergent_period)) {
            out.owner[s] = SlotSchedule::kEmergent;
        } else {
            out.owner[s] = perm[next % n_units];
            ++next;
        }
    }
    return out;
}

SlotInfo slot_at(const SlotSchedule& schedule, double t) {
    SlotInfo info;
    const double serial = std::floor(t / schedule.slot_len);
    info.serial = static_cast<std::uint64_t>(serial);
    info.index = static_cast<std::size_t>(info.serial % schedule.slots_per_day());
    info.t_into_slot = t - serial * schedule.slot_len;
    info.owner = schedule.owner[info.index];
    info.kind = info.owner == SlotSchedule::kEmergent ? SlotKind::Emergent : SlotKind::Regular;
    return info;
}

}  // namespace psewer
