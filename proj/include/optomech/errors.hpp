#pragma once

#include <stdexcept>
#include <string>

namespace optomech {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed config, conflicting keys, invalid sweep spec.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A covariance (or an argument derived from one) violates the uncertainty principle.
class PhysicalityError : public Error {
public:
    using Error::Error;
};

/// Drift matrix is not Hurwitz; no steady state exists.
class StabilityError : public Error {
public:
    using Error::Error;
};

/// Linear algebra failure: singular system, residual too large, eigen solver breakdown.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Input lies outside the branch of a formula that is implemented.
class UnsupportedBranchError : public Error {
public:
    using Error::Error;
};

}  // namespace optomech
