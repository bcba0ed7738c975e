#pragma once

#include <stdexcept>
#include <string>

namespace clarity {

/// Adaptive quadrature ran out of subdivisions before reaching tolerance.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operation requires a signal distribution symmetric about 0.
class SymmetryError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Operation requires a compatible signal distribution (zero Gaussian-weighted mean).
class CompatibilityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// The requested decomposition collapses (pi1 = 0 or rho1 = 0).
class DegenerateError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Bracketed root finding: no root on any admissible branch.
class NoRootError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace clarity
