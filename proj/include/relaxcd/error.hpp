#pragma once

#include <stdexcept>
#include <string>

namespace relaxcd {

enum class ErrorCode {
    invalid_argument = 1,  // malformed configuration or call arguments
    contract_violation,    // index/dimension preconditions
    invalid_problem,       // problem data breaks a construction invariant
    parse_error,
    io_error,
    numeric_fault,         // NaN, breakdown, solver non-convergence
    line_search_monotone,  // a solver hit the monotone line-search case
    internal_consistency,  // caches disagree with the iterate
    size_limit,
};

const char *to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) {
    throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const char *what) {
    if (!condition) { throw Error(code, what); }
}

}  // namespace relaxcd
