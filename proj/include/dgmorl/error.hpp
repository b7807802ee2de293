#pragma once

#include <stdexcept>
#include <string>

namespace dgmorl {

// Error identities used across the library. Tests match on the code, not on
// the message text.
enum class Errc {
    negative_component,
    sum_not_one,
    dimension_too_small,
    dimension_mismatch,
    empty_input,
    unsupported_dimension,
    invalid_count,
    non_finite,
    invalid_action,
    episode_finished,
    invalid_map,
    invalid_horizon,
    invalid_gamma,
    invalid_argument,
    too_few_demos,
    empty_repository,
    value_mismatch,
    io_error,
    format_error,
    empty_buffer,
    invalid_schedule,
    empty_policy_set,
    too_large_for_oracle,
    count_exceeds_available,
    config_error,
    missing_runs,
    step_misalignment,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
    throw Error(code, what);
}

} // namespace dgmorl
