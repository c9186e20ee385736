#pragma once

#include <stdexcept>
#include <string>

namespace subskel {

/// Malformed or inconsistent input data (dataset files, trajectories, queries).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration (classifier specs, split protocols, flags).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace subskel
