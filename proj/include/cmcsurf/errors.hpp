#pragma once

#include <stdexcept>
#include <string>

namespace cmcsurf {

// Invalid parameters or evaluation outside an operation's domain.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Quadrature or ODE integration failed to converge.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation at a removable or genuine singularity of a formula (axis,
// turning point). Callers are expected to switch representation.
class SingularityError : public NumericalError {
public:
    explicit SingularityError(const std::string& what) : NumericalError(what) {}
};

// A geometric precondition does not hold (e.g. projection pole on the surface).
class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cmcsurf
