#pragma once

#include <stdexcept>
#include <string>

namespace psewer {

/// Raised when a configuration value violates its contract. `field()` names the
/// offending key using the dotted scenario-file spelling (e.g. "control.slot_len").
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace psewer
