#pragma once

#include <stdexcept>
#include <string>

namespace qc
{

    /// Bad input: wrong dimension, violated precondition, malformed spec string.
    class ArgumentError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    /// The request is well-formed but exceeds what the implementation supports
    /// (cost caps, unsupported derivative orders, dimensions without a rule).
    class CapabilityError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// A numerical procedure could not reach its stated accuracy.
    class AccuracyError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Should-not-happen conditions (broken invariants).
    class InternalError : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };

} // namespace qc
