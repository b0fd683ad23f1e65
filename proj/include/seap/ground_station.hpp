#pragma once

#include <map>
#include <optional>
#include <string>

#include "seap/messages.hpp"

namespace seap {

// Appraisal policy of the verifier role: pre-registered device artifacts plus
// the reference software measurement. Attestation keys start absent and are
// pinned by the genesis exchange.
struct VerifierPolicy {
    Hash32 reference_measurement{};
    std::array<std::string, 2> registered_serials; // {closed anchor, open anchor}
    std::optional<std::array<Bytes, 2>> registered_attestation_keys;
    std::int64_t nonce_ttl_ms = 0; // defaults to W at construction sites
    bool degraded_mode_allowed = false;
    // Disables serial/measurement pinning. Exists solely to reproduce the
    // relay/MitM indistinguishability scenarios; never disabled in honest
    // deployments.
    bool identity_checks_enabled = true;
    bool conflicting_genesis_alarm = false;
};

enum class AppraisalStatus { accept, accept_degraded, reject };

struct AppraisalResult {
    AppraisalStatus status = AppraisalStatus::reject;
    std::string reason; // stable reason code when rejected

    bool accepted() const { return status != AppraisalStatus::reject; }
};

// accept: fresh nonce, matching measurement, both anchors verify.
// accept-degraded: exactly one anchor verifies and policy allows it.
AppraisalResult appraise_eat(const VerifierPolicy& policy, const EatToken& token,
                             const Nonce& expected_nonce, std::int64_t now_ms);

// Pins the attestation keys carried by a genesis token's slot reports after
// matching serials and key policy flags. Throws serial_mismatch /
// policy_flag_missing / already_bootstrapped.
VerifierPolicy genesis_bootstrap(VerifierPolicy policy, const EatToken& token,
                                 const std::vector<SlotReport>& slot_reports);

// Ground-station state machine: session initiation, hello-ack validation,
// endorsement issuance, certificate verification.
class GsAgent {
public:
    GsAgent(GsId id, KeyPair keypair, KeyRegistry committee_view, std::int64_t window_ms,
            VerifierPolicy policy);

    HelloMsg initiate_hello(std::int64_t now_ms, DetRng& rng,
                            std::size_t nonce_bytes = kDefaultNonceBytes);

    // Emits key-verify iff the session is fresh, both nonce signatures
    // verify, and both quotes appraise. Failures are silent drops; the reason
    // code of the last drop is retained for the trace.
    std::optional<KeyVerifyMsg> handle_hello_ack(const HelloAckMsg& msg, std::int64_t now_ms);

    bool handle_cert(const CertificateOfAuthorization& cert);

    // Key rotation at committee handover: fresh pair for the new epoch, old
    // private handle irreversibly tombstoned.
    void rotate_key(DetRng& rng);

    GsId id() const { return id_; }
    const KeyPair& keypair() const { return keypair_; }
    const KeyPair& retired_keypair() const { return retired_; } // tombstoned after rotation
    const KeyRegistry& committee_view() const { return committee_view_; }
    void set_committee_view(KeyRegistry view) { committee_view_ = std::move(view); }
    const VerifierPolicy& policy() const { return policy_; }
    VerifierPolicy& policy() { return policy_; }
    const std::optional<CertificateOfAuthorization>& received_cert() const { return received_cert_; }
    std::int64_t window_ms() const { return window_ms_; }
    std::optional<std::string> last_drop_reason() const { return last_drop_reason_; }
    std::size_t open_sessions() const { return sessions_.size(); }
    std::optional<std::int64_t> session_start(const Nonce& nonce) const;

private:
    bool appraise_quote(const TeeQuote& quote, const Bytes& carried_vk, int anchor_index);
    std::optional<KeyVerifyMsg> drop(const char* reason);

    GsId id_;
    KeyPair keypair_;
    KeyPair retired_;
    KeyRegistry committee_view_;
    std::int64_t window_ms_;
    VerifierPolicy policy_;
    std::map<Nonce, std::int64_t> sessions_; // nonce -> start ms
    std::optional<CertificateOfAuthorization> received_cert_;
    std::optional<std::string> last_drop_reason_;
};

// Re-verification a relying party can run on any certificate against a
// committee registry (used by agents and by trace validation).
bool verify_certificate(const CertificateOfAuthorization& cert, const KeyRegistry& committee);

} // namespace seap
