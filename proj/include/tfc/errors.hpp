#pragma once

#include <stdexcept>
#include <string>

#include "tfc/model.hpp"

namespace tfc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Physically meaningless or out-of-domain input values.
class InvalidParameters : public Error
{
public:
    using Error::Error;
};

/// A zero factor in the Kral-Shapiro product leaves the cycle topology undefined.
class DegenerateCycle : public Error
{
public:
    using Error::Error;
};

/// Malformed configuration text, unknown keys, or a failed validation.
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// The adiabatic gap closes somewhere on the torus grid (phase boundary).
class GapClosing : public Error
{
public:
    GapClosing(const std::string& what, TorusPoint where)
        : Error(what), where_(where)
    {
    }

    TorusPoint where() const noexcept { return where_; }

private:
    TorusPoint where_;
};

/// Loss of unitarity or another internal numerical breakdown.
class IntegratorFailure : public Error
{
public:
    using Error::Error;
};

} // namespace tfc
