#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace egfem {

using Vec2 = Eigen::Vector2d;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class MeshError : public Error {
public:
    using Error::Error;
};

/// Raised when a pointwise coefficient is evaluated outside its domain
/// (e.g. k + u <= 0 for the Michaelis-Menten reaction term).
class DomainError : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

#define EGFEM_REQUIRE(cond, ExceptionType, msg) \
    do {                                         \
        if (!(cond)) throw ExceptionType(msg);   \
    } while (false)

}  // namespace egfem
