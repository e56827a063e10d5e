#pragma once

#include <stdexcept>
#include <string>

namespace nngp {

// Thrown when a statistic is requested from fewer samples than it needs.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Counter or count combination would exceed the 2^63 budget.
class CapacityError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// Least-squares problem is degenerate or its preconditions are not met.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Density mass outside the representable window exceeds the allowed leakage.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double leaked)
        : std::runtime_error(what), leaked_mass(leaked) {}
    double leaked_mass;
};

// Grid too coarse for the requested projection.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Vector lengths disagree with the declared network shape.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace nngp
