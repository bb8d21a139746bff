#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tlurkit {

enum class ErrorCode {
    invalid_argument,
    dimension_mismatch,
    parameter_out_of_range,
    invalid_state,
    invalid_bound,
    unphysical_state,
    parse_error,
    no_crossing,
    non_monotone,
    degenerate_decomposition,
    non_convergence,
    numerical_failure,
};

std::string_view to_string(ErrorCode code);

// Numerical failures map to CLI exit code 1, everything else is bad input (2).
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace tlurkit
