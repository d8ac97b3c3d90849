#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "psewer/metrics.hpp"
#include "psewer/simulation.hpp"

namespace psewer {

/// File-system failure naming the path involved.
class IoError : public std::runtime_error {
public:
    IoError(std::filesystem::path path, const std::string& what)
        : std::runtime_error(path.string() + ": " + what), path_(std::move(path)) {}
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

/// A scenario document: every simulation input plus run metadata.
///
/// Text format, one `key = value` per line, `#` starts a comment:
///
///     label = reference
///     seed = 7
///     control.enabled = ABCD
///     control.pt_additional = 10
///     profile.hourly_weights = 0.3, 0.2, ...   # 24 values, rescaled to sum 24
///
/// Every key has a default except `seed`, which is mandatory. Unknown keys
/// are rejected.
struct Scenario {
    SimConfig sim;
    std::string out_dir = "out";
    double window = 7200.0;  // s, metric window
    WindowMode window_mode = WindowMode::Moving;
};

/// All recognised keys, in canonical order.
const std::vector<std::string>& scenario_keys();

/// Applies one `key = value` assignment. Throws ConfigError naming the key.
void apply_setting(Scenario& scenario, std::string_view key, std::string_view value);

/// Applies an override of the form "key=value".
void apply_override(Scenario& scenario, std::string_view assignment);

/// Parses scenario text. `origin` is used in error messages. Does not
/// validate the result; call Scenario::sim.validate() after overrides.
Scenario parse_scenario(std::string_view text, const std::string& origin = "<scenario>");

/// Reads and parses a scenario file. Throws IoError when unreadable.
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text of `scenario` that parse_scenario reads back unchanged.
std::string format_scenario(const Scenario& scenario);

}  // namespace psewer
