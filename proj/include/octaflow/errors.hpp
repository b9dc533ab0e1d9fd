#ifndef OCTAFLOW_ERRORS_HPP
#define OCTAFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace octaflow {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad argument values (non-finite side, v3 <= 0, M >= N, ...).
struct InvalidParameterError : Error {
    using Error::Error;
};

// Argument outside the documented domain (tau > horizon, n < 2, ...).
struct RangeError : Error {
    using Error::Error;
};

// Structurally broken input (zero-area polygon, interval with u >= v).
struct DegenerateInputError : Error {
    using Error::Error;
};

// Point-level singularity: wrap() called at/near a cone point.
struct SingularityError : Error {
    using Error::Error;
};

// Orbit hits a vertex / cone point. Carries where it happened.
struct PathologicalTrajectoryError : Error {
    double tau;       // arc-length time of the offending hit
    long crossing;    // crossing / bounce index, -1 if unknown
    PathologicalTrajectoryError(const std::string& what, double tau_, long crossing_)
        : Error(what), tau(tau_), crossing(crossing_) {}
};

// Numeric sliver or unlocatable point in an atlas.
struct GeometryError : Error {
    using Error::Error;
};

// Quadrature failed to converge within its budget.
struct NumericError : Error {
    using Error::Error;
};

} // namespace octaflow

#endif
