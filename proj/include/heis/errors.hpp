#pragma once

#include <stdexcept>
#include <string>

namespace heis {

/// Raised when an input violates an operation's contract. The CLI maps it to exit status 2.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a solver or root-finder fails to converge. The CLI maps it to exit status 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const char* msg) {
    if (!cond) throw PreconditionError(msg);
}

}  // namespace heis
