#pragma once

#include <stdexcept>
#include <string>

namespace seap {

// Stable error codes surfaced in reports and asserted by tests.
enum class ErrorCode {
    deleted_key,
    malformed_signature,
    malformed_key,
    slots_occupied,
    failed_element,
    empty_slot,
    not_certified,
    both_elements_failed,
    unknown_party,
    malformed_message,
    insufficient_signatures,
    invalid_handover,
    serial_mismatch,
    policy_flag_missing,
    already_bootstrapped,
    concurrency_bound_exceeded,
    window_too_short,
    assumption_violated,
    config_invalid,
    negative_input,
    unknown_kind,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace seap
