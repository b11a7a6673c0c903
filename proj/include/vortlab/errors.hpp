#pragma once

#include <stdexcept>
#include <string>

namespace vortlab {

/// A documented precondition of an operation does not hold for its input.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Nonzero-mean vorticity has no periodic Biot-Savart velocity.
class CirculationError : public PreconditionError {
public:
    explicit CirculationError(const std::string& what)
        : PreconditionError("circulation obstruction on torus: " + what) {}
};

/// A solver produced non-finite values or failed to contract.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace vortlab
