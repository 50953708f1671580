#pragma once

#include <stdexcept>
#include <string>

namespace polopt {

// Thrown when a rotation leaves the single-cover region (angle >= pi).
struct RotationDomainError : std::domain_error {
    explicit RotationDomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Thrown when a simulated state leaves the valid domain (non-finite, attitude flip).
struct SimDiverged : std::runtime_error {
    explicit SimDiverged(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when the controller hits a singular configuration (degenerate thrust vector).
struct ControllerSingular : std::runtime_error {
    explicit ControllerSingular(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when an optimizer produces non-finite iterates.
struct OptimizerDiverged : std::runtime_error {
    explicit OptimizerDiverged(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a reference trajectory is singular (zero desired velocity for the car).
struct ReferenceSingular : std::runtime_error {
    explicit ReferenceSingular(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace polopt
