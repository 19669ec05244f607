#pragma once

#include <stdexcept>
#include <string>

namespace mosqdyn {

/// Raised when a numerical certificate contradicts a proven property of the model
/// (a second fixed point, a spurious periodic root, a failed sign condition...).
class VerificationError : public std::runtime_error {
public:
    explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by the ODE integrator when an iterate becomes non-finite or drifts
/// towards the x = -1 singularity.
class InstabilityError : public std::runtime_error {
public:
    explicit InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mosqdyn
