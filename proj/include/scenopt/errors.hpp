#pragma once

#include <stdexcept>
#include <string>

namespace scenopt
{

    /// Base of every error raised by the library.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Vector or matrix extents that do not line up.
    class DimensionError : public Error
    {
    public:
        using Error::Error;
    };

    /// A value violates a type invariant (non-finite, out of bounds, bad sum).
    class ValidationError : public Error
    {
    public:
        using Error::Error;
    };

    /// No portfolio over the selected assets can satisfy the weight bounds.
    class InfeasibleBoundsError : public Error
    {
    public:
        using Error::Error;
    };

    class ConfigError : public Error
    {
    public:
        using Error::Error;
    };

    class IoError : public Error
    {
    public:
        using Error::Error;
    };

    /// Malformed input file. Messages carry the 1-based line number.
    class FormatError : public Error
    {
    public:
        using Error::Error;
    };

    class InsufficientDataError : public Error
    {
    public:
        using Error::Error;
    };

    /// Raised by the exhaustive oracle when the lattice would be too large.
    class ComplexityGuardError : public Error
    {
    public:
        using Error::Error;
    };

} // namespace scenopt
