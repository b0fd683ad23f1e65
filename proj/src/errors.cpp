#include "seap/errors.hpp"

namespace seap {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::deleted_key: return "deleted-key";
        case ErrorCode::malformed_signature: return "malformed-signature";
        case ErrorCode::malformed_key: return "malformed-key";
        case ErrorCode::slots_occupied: return "slots-occupied";
        case ErrorCode::failed_element: return "failed-element";
        case ErrorCode::empty_slot: return "empty-slot";
        case ErrorCode::not_certified: return "not-certified";
        case ErrorCode::both_elements_failed: return "both-elements-failed";
        case ErrorCode::unknown_party: return "unknown-party";
        case ErrorCode::malformed_message: return "malformed-message";
        case ErrorCode::insufficient_signatures: return "insufficient-signatures";
        case ErrorCode::invalid_handover: return "invalid-handover";
        case ErrorCode::serial_mismatch: return "serial-mismatch";
        case ErrorCode::policy_flag_missing: return "policy-flag-missing";
        case ErrorCode::already_bootstrapped: return "already-bootstrapped";
        case ErrorCode::concurrency_bound_exceeded: return "concurrency-bound-exceeded";
        case ErrorCode::window_too_short: return "window-too-short";
        case ErrorCode::assumption_violated: return "assumption-violated";
        case ErrorCode::config_invalid: return "config-invalid";
        case ErrorCode::negative_input: return "negative-input";
        case ErrorCode::unknown_kind: return "unknown-kind";
    }
    return "unknown";
}

} // namespace seap
