#pragma once

#include <stdexcept>
#include <string>

namespace bistab {

/// Input rejected before any computation (bad flag, malformed signal, violated precondition).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A closed form was requested outside the range of the material constant where it is real.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Numerical procedure could not produce a result (bracket failure, non-convergence).
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A bisection seed bracket has the same predicate value at both ends.
class BracketError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

/// A trajectory left the admissible state range (|x| > escape bound) before the end time.
class FiniteEscape : public ComputationError {
public:
    FiniteEscape(double time, double state, int direction)
        : ComputationError("finite escape at t=" + std::to_string(time) +
                           " (x=" + std::to_string(state) + ")"),
          time_(time), state_(state), direction_(direction) {}

    double time() const noexcept { return time_; }
    double state() const noexcept { return state_; }
    /// +1 when the state escaped upward, -1 downward.
    int direction() const noexcept { return direction_; }

private:
    double time_;
    double state_;
    int direction_;
};

}  // namespace bistab
