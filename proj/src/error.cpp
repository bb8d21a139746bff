#include "tlurkit/error.hpp"

namespace tlurkit {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::parameter_out_of_range: return "parameter-out-of-range";
    case ErrorCode::invalid_state: return "invalid-state";
    case ErrorCode::invalid_bound: return "invalid-bound";
    case ErrorCode::unphysical_state: return "unphysical-state";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::no_crossing: return "no-crossing";
    case ErrorCode::non_monotone: return "non-monotone";
    case ErrorCode::degenerate_decomposition: return "degenerate-decomposition";
    case ErrorCode::non_convergence: return "non-convergence";
    case ErrorCode::numerical_failure: return "numerical-failure";
    }
    return "unknown";
}

bool is_numerical(ErrorCode code) {
    return code == ErrorCode::degenerate_decomposition || code == ErrorCode::non_convergence ||
           code == ErrorCode::numerical_failure;
}

} // namespace tlurkit
