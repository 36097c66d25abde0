#pragma once

#include <stdexcept>
#include <string>

namespace dmot {

// Error families map onto CLI exit codes: ConfigError -> 2, IoError -> 3,
// ContractError (bad data, dimension mismatch, parse failure) -> 4.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ContractError : std::runtime_error {
    explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dmot
