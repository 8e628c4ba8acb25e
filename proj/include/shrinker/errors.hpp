#pragma once

#include <stdexcept>
#include <string>

namespace shrinker {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain where a formula is defined (e.g. x on the axis).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Supplied derivative data disagrees with the ODE beyond tolerance.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Series coefficients exceeded the magnitude cap; the initial height is
/// outside the range the seed supports.
class SeedRangeError : public Error {
public:
    using Error::Error;
};

/// Adaptive step size underflowed.
class StepFailure : public Error {
public:
    using Error::Error;
};

class BracketInvalid : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class ClosureFailure : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace shrinker
