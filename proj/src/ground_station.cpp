#include "seap/ground_station.hpp"

#include <algorithm>
#include <set>

#include "seap/codec.hpp"

namespace seap {

AppraisalResult appraise_eat(const VerifierPolicy& policy, const EatToken& token,
                             const Nonce& expected_nonce, std::int64_t now_ms) {
    if (token.nonce != expected_nonce) return {AppraisalStatus::reject, "stale-nonce"};
    if (now_ms - token.issued_at_ms > policy.nonce_ttl_ms || now_ms < token.issued_at_ms) {
        return {AppraisalStatus::reject, "nonce-expired"};
    }
    if (token.measurement_hash != policy.reference_measurement) {
        return {AppraisalStatus::reject, "measurement-mismatch"};
    }
    if (policy.identity_checks_enabled && token.se_serials != policy.registered_serials) {
        return {AppraisalStatus::reject, "serial-mismatch"};
    }
    if (!policy.registered_attestation_keys) {
        return {AppraisalStatus::reject, "not-bootstrapped"};
    }
    const Bytes body = token.signing_body();
    const auto& keys = *policy.registered_attestation_keys;
    auto check = [&](const std::optional<Bytes>& sig, const Bytes& key) {
        return sig.has_value() && verify(key, body, *sig);
    };
    const bool closed_ok = check(token.sig_nxp, keys[0]);
    const bool open_ok = check(token.sig_trop, keys[1]);
    if (closed_ok && open_ok) return {AppraisalStatus::accept, ""};
    if (closed_ok || open_ok) {
        if (policy.degraded_mode_allowed) return {AppraisalStatus::accept_degraded, ""};
        return {AppraisalStatus::reject, "degraded-not-allowed"};
    }
    return {AppraisalStatus::reject, "bad-signature"};
}

VerifierPolicy genesis_bootstrap(VerifierPolicy policy, const EatToken& token,
                                 const std::vector<SlotReport>& slot_reports) {
    if (policy.registered_attestation_keys) {
        policy.conflicting_genesis_alarm = true;
        throw Error(ErrorCode::already_bootstrapped, "attestation keys already pinned");
    }
    if (policy.identity_checks_enabled && token.se_serials != policy.registered_serials) {
        throw Error(ErrorCode::serial_mismatch, "genesis token from unregistered device");
    }
    std::array<Bytes, 2> attestation_keys;
    std::array<bool, 2> found{false, false};
    for (const auto& report : slot_reports) {
        if (!report.origin_internal || !report.non_exportable) {
            throw Error(ErrorCode::policy_flag_missing, "slot report lacks required key policy");
        }
        if (report.slot_index != kAttestationSlot) continue;
        for (int anchor = 0; anchor < 2; ++anchor) {
            if (report.serial == token.se_serials[static_cast<std::size_t>(anchor)]) {
                if (policy.identity_checks_enabled &&
                    report.serial != policy.registered_serials[static_cast<std::size_t>(anchor)]) {
                    throw Error(ErrorCode::serial_mismatch, "report serial not pre-registered");
                }
                // Attestation-slot reports are self-signed by the key they
                // describe; the chain bottoms out at the serial match.
                if (!verify_slot_report(report, report.public_key)) {
                    throw Error(ErrorCode::policy_flag_missing, "report signature invalid");
                }
                attestation_keys[static_cast<std::size_t>(anchor)] = report.public_key;
                found[static_cast<std::size_t>(anchor)] = true;
            }
        }
    }
    if (!found[0] && !found[1]) {
        throw Error(ErrorCode::serial_mismatch, "no report matches a registered anchor");
    }
    // Token signatures must verify under the keys being pinned.
    const Bytes body = token.signing_body();
    if (found[0] && (!token.sig_nxp || !verify(attestation_keys[0], body, *token.sig_nxp))) {
        throw Error(ErrorCode::policy_flag_missing, "genesis token closed-anchor signature invalid");
    }
    if (found[1] && (!token.sig_trop || !verify(attestation_keys[1], body, *token.sig_trop))) {
        throw Error(ErrorCode::policy_flag_missing, "genesis token open-anchor signature invalid");
    }
    policy.registered_attestation_keys = attestation_keys;
    return policy;
}

GsAgent::GsAgent(GsId id, KeyPair keypair, KeyRegistry committee_view, std::int64_t window_ms,
                 VerifierPolicy policy)
    : id_(id),
      keypair_(std::move(keypair)),
      committee_view_(std::move(committee_view)),
      window_ms_(window_ms),
      policy_(std::move(policy)) {}

HelloMsg GsAgent::initiate_hello(std::int64_t now_ms, DetRng& rng, std::size_t nonce_bytes) {
    HelloMsg msg;
    msg.nonce = make_nonce(rng, nonce_bytes);
    msg.gs_id = id_;
    msg.signature = sign(keypair_, HelloMsg::signing_body(msg.nonce));
    sessions_[msg.nonce] = now_ms;
    // Expire sessions past the window so the table stays bounded.
    std::erase_if(sessions_, [&](const auto& kv) { return now_ms - kv.second > window_ms_; });
    return msg;
}

std::optional<std::int64_t> GsAgent::session_start(const Nonce& nonce) const {
    auto it = sessions_.find(nonce);
    if (it == sessions_.end()) return std::nullopt;
    return it->second;
}

std::optional<KeyVerifyMsg> GsAgent::drop(const char* reason) {
    last_drop_reason_ = reason;
    return std::nullopt;
}

bool GsAgent::appraise_quote(const TeeQuote& quote, const Bytes& carried_vk, int anchor_index) {
    if (quote.claimed_public_key != carried_vk) return false;
    if (quote.slot_report.public_key != carried_vk) return false;
    if (quote.slot_report.slot_index != kIdentitySlot) return false;
    if (!quote.slot_report.origin_internal || !quote.slot_report.non_exportable) return false;
    if (quote.slot_report.serial != quote.se_serial) return false;
    if (policy_.identity_checks_enabled) {
        if (quote.se_serial != policy_.registered_serials[static_cast<std::size_t>(anchor_index)]) {
            return false;
        }
        if (quote.measurement_hash != policy_.reference_measurement) return false;
    }
    if (policy_.registered_attestation_keys) {
        const auto& key = (*policy_.registered_attestation_keys)[static_cast<std::size_t>(anchor_index)];
        if (!verify_slot_report(quote.slot_report, key)) return false;
    }
    return true;
}

std::optional<KeyVerifyMsg> GsAgent::handle_hello_ack(const HelloAckMsg& msg, std::int64_t now_ms) {
    last_drop_reason_.reset();
    auto it = sessions_.find(msg.nonce);
    if (it == sessions_.end()) return drop("session-unknown");
    if (now_ms - it->second >= window_ms_) return drop("session-expired");

    const Bytes nonce_body = HelloAckMsg::nonce_signing_body(msg.nonce);
    const bool closed_present = msg.vk_nxp && msg.quote_nxp && msg.sig_nonce_nxp;
    const bool open_present = msg.vk_trop && msg.quote_trop && msg.sig_nonce_trop;
    if (!closed_present && !open_present) return drop("no-anchor");
    if ((!closed_present || !open_present) && !policy_.degraded_mode_allowed) {
        return drop("degraded-not-allowed");
    }
    if (closed_present) {
        if (!verify(*msg.vk_nxp, nonce_body, *msg.sig_nonce_nxp)) return drop("bad-nonce-signature");
        if (!appraise_quote(*msg.quote_nxp, *msg.vk_nxp, 0)) return drop("quote-rejected");
    }
    if (open_present) {
        if (!verify(*msg.vk_trop, nonce_body, *msg.sig_nonce_trop)) return drop("bad-nonce-signature");
        if (!appraise_quote(*msg.quote_trop, *msg.vk_trop, 1)) return drop("quote-rejected");
    }

    sessions_.erase(it); // single endorsement per session
    KeyVerifyMsg out;
    out.timestamp_ms = now_ms;
    out.gs_id = id_;
    out.signature = sign(keypair_, KeyVerifyMsg::signing_body(msg.primary_vk(), now_ms));
    return out;
}

bool verify_certificate(const CertificateOfAuthorization& cert, const KeyRegistry& committee) {
    if (cert.endorsements.empty()) return false;
    std::set<GsId> ids;
    for (const auto& e : cert.endorsements) {
        if (!ids.insert(e.gs_id).second) return false;
        auto pk = committee.find(e.gs_id);
        if (!pk) return false;
        if (!verify(*pk, KeyVerifyMsg::signing_body(cert.vk_s, e.ts_ms), e.signature)) return false;
    }
    return verify(cert.vk_s, cert.signing_body(), cert.tee_signature);
}

bool GsAgent::handle_cert(const CertificateOfAuthorization& cert) {
    if (!verify_certificate(cert, committee_view_)) {
        last_drop_reason_ = "cert-invalid";
        return false;
    }
    received_cert_ = cert;
    return true;
}

void GsAgent::rotate_key(DetRng& rng) {
    retired_ = keypair_;
    keypair_ = generate_keypair(CryptoSuite::get(keypair_.suite), rng.next_u64());
    // Secure deletion: the old private handle is unusable from here on.
    retired_.private_handle->destroy();
}

} // namespace seap
