#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liprop {

// Input outside the contract of an operation (bad range, bad argument).
// The message names the offending quantity and, where meaningful, the valid interval.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The adaptive integrator could not make progress (step-size underflow).
// Carries the physical position z (nm) at which integration stalled.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double failingZ)
        : std::runtime_error(what), failingZ_(failingZ) {}

    double failingZ() const noexcept { return failingZ_; }

private:
    double failingZ_;
};

// A quadrature grid is too coarse to resolve the propagator oscillation.
// Carries the minimum point count that would satisfy the sampling criterion.
class ResolutionError : public std::runtime_error {
public:
    ResolutionError(const std::string& what, std::size_t requiredPoints)
        : std::runtime_error(what), requiredPoints_(requiredPoints) {}

    std::size_t requiredPoints() const noexcept { return requiredPoints_; }

private:
    std::size_t requiredPoints_;
};

// Kernel evaluation requested inside the exclusion band around a focal plane,
// where the propagator prefactor diverges. Carries the offending phase.
class CausticError : public std::runtime_error {
public:
    CausticError(const std::string& what, double theta)
        : std::runtime_error(what), theta_(theta) {}

    double theta() const noexcept { return theta_; }

private:
    double theta_;
};

// A configuration file was rejected; the message names the offending key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace liprop
