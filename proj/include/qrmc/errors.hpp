#pragma once

#include <stdexcept>
#include <string>

namespace qrmc {

/// Index-set construction would exceed the configured size limit.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Forward simulation produced a non-finite or out-of-bounds state.
class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, int step)
        : std::runtime_error(what), step_(step) {}
    int step() const noexcept { return step_; }

private:
    int step_;
};

/// A computed quantity (coefficient, response, metric) is not finite.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reading or writing an artifact failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qrmc
