#pragma once

#include <stdexcept>
#include <string>

namespace bhcav {

// Input violates a documented precondition or invariant. CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure (pole hit, degenerate system). CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// U_e U_g == U_eg^2: the stationary occupation equations cannot be inverted.
class SingularMatrixError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A perturbation denominator vanished. `which` names the offending term.
class PoleError : public NumericalError {
public:
    PoleError(std::string which, double value)
        : NumericalError("pole: denominator '" + which + "' vanishes (value " +
                         std::to_string(value) + ")"),
          which_(std::move(which)) {}

    const std::string& which() const noexcept { return which_; }

private:
    std::string which_;
};

// A root-finding bracket endpoint sits on a pole.
class BracketPoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace bhcav
