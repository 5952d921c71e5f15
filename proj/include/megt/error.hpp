#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace megt {

/// Invalid model parameter (probabilities out of range, odd ring degree, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite input or a value outside a function's numeric domain.
class NumericError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Bad configuration file, unknown key or unparsable value. Carries the key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Input data violates its schema.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace megt
