#pragma once

#include <stdexcept>
#include <string>

namespace uavnet {

// Argument outside the mathematical domain of an operation (h <= 0, d <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Inconsistent or invalid configuration (no stations, bad presets, unknown keys).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failure while training a Q-network.
class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file; the message names the offending row.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace uavnet
