#pragma once

#include <stdexcept>
#include <string>

namespace secrecy {

// Thrown when the target secrecy rate cannot be met even without any
// eavesdropper: Bob's SINR falls short of 2^R_th - 1. deficit() is how far
// short, in SINR units.
class InfeasibleRateError : public std::runtime_error {
public:
    InfeasibleRateError(const std::string& what, double deficit)
        : std::runtime_error(what), deficit_(deficit) {}

    double deficit() const noexcept { return deficit_; }

private:
    double deficit_;
};

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace secrecy
