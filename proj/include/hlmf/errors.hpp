#pragma once

#include <stdexcept>
#include <string>

namespace hlmf {

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// e^u would overflow: the iterate has entered the blow-up regime.
class OverflowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// PV evaluation requested too close to the edge of the support.
class BoundaryEvaluationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidArgument(msg);
}

}  // namespace hlmf
