#pragma once
#include <stdexcept>
#include <string>

namespace hygro {

// Input state outside the validity range of a correlation or operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Fixed-point / sub-iteration loop exhausted without meeting the tolerance.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double residual)
        : std::runtime_error(what), residual(residual) {}
    double residual;
};

// Scenario file violates the schema or contains unresolvable references.
class schema_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A reference scale (coefficient, volume, ...) is zero or non-finite.
class scaling_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Time march aborted; carries the dimensionless time of the failure.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, double t_star)
        : std::runtime_error(what), t_star(t_star) {}
    double t_star;
};

// The internal reference solution does not resolve the error being measured.
class reference_quality_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hygro
