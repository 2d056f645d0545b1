#pragma once

#include <stdexcept>
#include <string>

namespace swsgd {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

/// A parameter value makes an operation singular (e.g. theta = 0 where a
/// density has theta in a denominator).
class DegenerateParameterError : public Error {
public:
    using Error::Error;
};

class UnsupportedEstimatorError : public Error {
public:
    using Error::Error;
};

/// An iterate left the admissible region (non-finite or beyond the guard).
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, long long iteration)
        : Error(what), iteration_(iteration) {}
    long long iteration() const noexcept { return iteration_; }

private:
    long long iteration_;
};

/// Eigenvalue stability condition of the covariance assembly failed.
class InstabilityError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    using Error::Error;
};

class NoIntersectionError : public Error {
public:
    using Error::Error;
};

class InvalidInputError : public Error {
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

}  // namespace swsgd
