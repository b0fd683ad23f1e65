#pragma once

#include <optional>
#include <set>
#include <vector>

#include "seap/messages.hpp"

namespace seap {

enum class SatellitePhase { pre_genesis, collecting, certified };

struct ProtocolParams {
    int gs_fault_bound = 0;      // t_GS
    int channel_fault_bound = 0; // t_ch
    std::int64_t window_ms = 0;  // W

    int required_endorsements() const { return gs_fault_bound + 2 * channel_fault_bound + 1; }
};

// Finds the earliest quorum window in `log`: a subset of `required` records
// with distinct gs ids whose timestamps all differ by less than `window_ms`.
// Records are ordered by (ts, gs, signature); within the earliest qualifying
// window the first record per station wins. Returns the selected subset.
std::optional<std::vector<EndorsementRecord>> find_quorum_window(
    std::vector<EndorsementRecord> log, std::int64_t window_ms, int required);

// The satellite TEE state machine: on-orbit genesis, hello handling,
// endorsement accumulation, certificate assembly, EAT issuance.
class SatelliteAgent {
public:
    struct Options {
        CryptoSuite suite = CryptoSuite::get(SuiteId::ecc_p256_class);
        ProtocolParams params;
        std::string closed_serial = "00000000000000a1";
        std::string open_serial = "00000000000000b2";
        Bytes ta_binary = from_string("seap-trusted-applet-v1");
        bool closed_failed_at_boot = false;
        bool open_failed_at_boot = false;
        // Assembles a certificate at this count instead of the protocol
        // threshold. Attack-reproduction knob only.
        std::optional<int> threshold_override;
    };

    SatelliteAgent(Options options, KeyRegistry trust_store);

    // Runs genesis on both elements and enters the collecting phase. A single
    // failed element sets single-anchor mode and continues.
    void on_boot(DetRng& rng);

    std::optional<HelloAckMsg> handle_hello(const HelloMsg& msg, std::int64_t now_ms);

    // Returns the certificate when this endorsement completes a quorum.
    std::optional<CertificateOfAuthorization> handle_key_verify(const KeyVerifyMsg& msg, GsId sender);

    // One cert message per committee member. Throws not_certified.
    std::vector<std::pair<GsId, CertificateOfAuthorization>> broadcast_cert() const;

    EatToken issue_eat(const Nonce& nonce, std::int64_t now_ms);

    // Genesis EAT companion payload: attested reports for all live slots.
    std::vector<SlotReport> genesis_slot_reports() const;

    // Replaces the trust store if the handover verifies against the current
    // committee view; recomputes the measurement. Throws invalid_handover.
    void update_committee(const HandoverCertificate& handover);

    SatellitePhase phase() const { return phase_; }
    bool single_anchor() const { return single_anchor_; }
    const Bytes& identity_vk() const; // vk_S
    std::optional<Bytes> vk_nxp() const;
    std::optional<Bytes> vk_trop() const;
    const Hash32& measurement() const { return measurement_; }
    const KeyRegistry& trust_store() const { return trust_store_; }
    const std::vector<EndorsementRecord>& log() const { return log_; }
    const std::optional<CertificateOfAuthorization>& certificate() const { return cert_; }
    std::uint64_t heartbeat_counter() const { return heartbeat_counter_; }
    const SecureElement& closed_element() const { return closed_; }
    const SecureElement& open_element() const { return open_; }
    SecureElement& closed_element() { return closed_; }
    SecureElement& open_element() { return open_; }
    const CryptoSuite& suite() const { return options_.suite; }
    const ProtocolParams& params() const { return options_.params; }
    std::optional<std::string> last_drop_reason() const { return last_drop_reason_; }

private:
    void recompute_measurement();
    TeeQuote make_quote(const SecureElement& element) const;
    std::optional<HelloAckMsg> drop(const char* reason);

    Options options_;
    SecureElement closed_;
    SecureElement open_;
    KeyRegistry trust_store_;
    Hash32 measurement_{};
    SatellitePhase phase_ = SatellitePhase::pre_genesis;
    bool single_anchor_ = false;
    std::vector<EndorsementRecord> log_;
    std::set<EndorsementRecord> seen_; // exact-duplicate suppression
    std::optional<CertificateOfAuthorization> cert_;
    std::uint64_t heartbeat_counter_ = 0;
    std::optional<std::string> last_drop_reason_;
};

} // namespace seap
