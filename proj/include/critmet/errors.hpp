// errors.hpp - exception types shared by every module

#pragma once

#include <stdexcept>
#include <string>

namespace critmet {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad shapes, bad sizes, malformed input
struct ValidationError : Error {
    using Error::Error;
};

// input outside the region where a formula holds (poles, above threshold, ...)
struct DomainError : Error {
    using Error::Error;
};

struct NumericalError : Error {
    using Error::Error;
};

// caller-chosen knobs (step sizes, tolerances) that cannot work
struct ConfigError : Error {
    using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

inline void require_domain(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

} // namespace detail
} // namespace critmet
