#include "relaxcd/error.hpp"

namespace relaxcd {

const char *to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid argument";
        case ErrorCode::contract_violation: return "contract violation";
        case ErrorCode::invalid_problem: return "invalid problem";
        case ErrorCode::parse_error: return "parse error";
        case ErrorCode::io_error: return "i/o error";
        case ErrorCode::numeric_fault: return "numeric fault";
        case ErrorCode::line_search_monotone: return "monotone line search";
        case ErrorCode::internal_consistency: return "internal consistency error";
        case ErrorCode::size_limit: return "size limit exceeded";
    }
    return "unknown error";
}

}  // namespace relaxcd
