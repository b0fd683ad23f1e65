#include "seap/satellite.hpp"

#include <algorithm>

#include "seap/codec.hpp"

namespace seap {

std::optional<std::vector<EndorsementRecord>> find_quorum_window(
    std::vector<EndorsementRecord> log, std::int64_t window_ms, int required) {
    if (required <= 0) return std::nullopt;
    std::sort(log.begin(), log.end());
    const std::size_t n = log.size();
    for (std::size_t i = 0; i < n; ++i) {
        // All records with ts in [ts_i, ts_i + W) — any `required` of them
        // with distinct ids have pairwise differences < W.
        std::vector<EndorsementRecord> picked;
        std::set<GsId> ids;
        for (std::size_t j = i; j < n && log[j].ts_ms - log[i].ts_ms < window_ms; ++j) {
            if (ids.insert(log[j].gs_id).second) {
                picked.push_back(log[j]);
                if (static_cast<int>(picked.size()) == required) return picked;
            }
        }
    }
    return std::nullopt;
}

SatelliteAgent::SatelliteAgent(Options options, KeyRegistry trust_store)
    : options_(std::move(options)),
      closed_(AnchorVendor::closed_anchor, options_.closed_serial),
      open_(AnchorVendor::open_anchor, options_.open_serial),
      trust_store_(std::move(trust_store)) {
    recompute_measurement();
}

void SatelliteAgent::recompute_measurement() {
    // The trust store is part of the measured state: swapping ground-station
    // keys changes the measurement the verifier appraises.
    Encoder enc;
    enc.bytes(options_.ta_binary);
    enc.bytes(trust_store_.canonical_encoding());
    measurement_ = sha256(enc.take());
}

void SatelliteAgent::on_boot(DetRng& rng) {
    if (phase_ != SatellitePhase::pre_genesis) {
        throw Error(ErrorCode::slots_occupied, "boot after genesis");
    }
    if (options_.closed_failed_at_boot) closed_.mark_failed();
    if (options_.open_failed_at_boot) open_.mark_failed();
    if (closed_.failed() && open_.failed()) {
        throw Error(ErrorCode::both_elements_failed, "no live anchor at boot");
    }
    if (!closed_.failed()) closed_.genesis(options_.suite, rng);
    if (!open_.failed()) open_.genesis(options_.suite, rng);
    single_anchor_ = closed_.failed() || open_.failed();
    phase_ = SatellitePhase::collecting;
}

const Bytes& SatelliteAgent::identity_vk() const {
    const SecureElement& primary = closed_.failed() ? open_ : closed_;
    const auto& slot = primary.slot(kIdentitySlot);
    if (slot.state != SlotState::occupied) {
        throw Error(ErrorCode::empty_slot, "identity key before genesis");
    }
    return slot.key->public_key;
}

std::optional<Bytes> SatelliteAgent::vk_nxp() const {
    if (closed_.failed() || closed_.slot(kIdentitySlot).state != SlotState::occupied) return std::nullopt;
    return closed_.slot(kIdentitySlot).key->public_key;
}

std::optional<Bytes> SatelliteAgent::vk_trop() const {
    if (open_.failed() || open_.slot(kIdentitySlot).state != SlotState::occupied) return std::nullopt;
    return open_.slot(kIdentitySlot).key->public_key;
}

TeeQuote SatelliteAgent::make_quote(const SecureElement& element) const {
    TeeQuote q;
    q.claimed_public_key = element.slot(kIdentitySlot).key->public_key;
    q.se_serial = element.serial();
    q.slot_report = element.attested_slot_report(kIdentitySlot);
    q.measurement_hash = measurement_;
    return q;
}

std::optional<HelloAckMsg> SatelliteAgent::drop(const char* reason) {
    last_drop_reason_ = reason;
    return std::nullopt;
}

std::optional<HelloAckMsg> SatelliteAgent::handle_hello(const HelloMsg& msg, std::int64_t now_ms) {
    (void)now_ms;
    last_drop_reason_.reset();
    if (phase_ == SatellitePhase::pre_genesis) return drop("pre-genesis");
    if (phase_ == SatellitePhase::certified) return drop("already-certified");
    auto sender_key = trust_store_.find(msg.gs_id);
    if (!sender_key) return drop("unknown-sender");
    if (!verify(*sender_key, HelloMsg::signing_body(msg.nonce), msg.signature)) {
        return drop("bad-signature");
    }

    HelloAckMsg ack;
    ack.nonce = msg.nonce;
    const Bytes nonce_body = HelloAckMsg::nonce_signing_body(msg.nonce);
    if (!closed_.failed()) {
        ack.vk_nxp = closed_.slot(kIdentitySlot).key->public_key;
        ack.quote_nxp = make_quote(closed_);
        ack.sig_nonce_nxp = closed_.sign_with_slot(kIdentitySlot, nonce_body);
    }
    if (!open_.failed()) {
        ack.vk_trop = open_.slot(kIdentitySlot).key->public_key;
        ack.quote_trop = make_quote(open_);
        ack.sig_nonce_trop = open_.sign_with_slot(kIdentitySlot, nonce_body);
    }
    return ack;
}

std::optional<CertificateOfAuthorization> SatelliteAgent::handle_key_verify(const KeyVerifyMsg& msg,
                                                                            GsId sender) {
    last_drop_reason_.reset();
    if (phase_ != SatellitePhase::collecting) {
        drop(phase_ == SatellitePhase::certified ? "already-certified" : "pre-genesis");
        return std::nullopt;
    }
    auto sender_key = trust_store_.find(sender);
    if (!sender_key) {
        drop("unknown-sender");
        return std::nullopt;
    }
    if (!verify(*sender_key, KeyVerifyMsg::signing_body(identity_vk(), msg.timestamp_ms),
                msg.signature)) {
        drop("bad-signature");
        return std::nullopt;
    }
    EndorsementRecord record{msg.timestamp_ms, sender, msg.signature};
    if (!seen_.insert(record).second) {
        drop("duplicate-endorsement");
        return std::nullopt;
    }
    log_.push_back(record);

    const int required = options_.threshold_override.value_or(options_.params.required_endorsements());
    auto window = find_quorum_window(log_, options_.params.window_ms, required);
    if (!window) return std::nullopt;

    CertificateOfAuthorization cert;
    cert.vk_s = identity_vk();
    cert.endorsements = std::move(*window);
    const SecureElement& primary = closed_.failed() ? open_ : closed_;
    cert.tee_signature = primary.sign_with_slot(kIdentitySlot, cert.signing_body());
    cert_ = cert;
    phase_ = SatellitePhase::certified;
    return cert;
}

std::vector<std::pair<GsId, CertificateOfAuthorization>> SatelliteAgent::broadcast_cert() const {
    if (phase_ != SatellitePhase::certified || !cert_) {
        throw Error(ErrorCode::not_certified, "broadcast before certification");
    }
    std::vector<std::pair<GsId, CertificateOfAuthorization>> out;
    out.reserve(trust_store_.size());
    for (const auto& [id, pk] : trust_store_.entries()) {
        (void)pk;
        out.emplace_back(id, *cert_);
    }
    return out;
}

EatToken SatelliteAgent::issue_eat(const Nonce& nonce, std::int64_t now_ms) {
    if (phase_ == SatellitePhase::pre_genesis) {
        throw Error(ErrorCode::empty_slot, "attestation before genesis");
    }
    if (closed_.failed() && open_.failed()) {
        throw Error(ErrorCode::both_elements_failed, "no live anchor");
    }
    EatToken token;
    token.nonce = nonce;
    token.measurement_hash = measurement_;
    token.se_serials = {closed_.serial(), open_.serial()};
    token.issued_at_ms = now_ms;
    token.degraded = closed_.failed() || open_.failed();
    const Bytes body = token.signing_body();
    if (!closed_.failed()) token.sig_nxp = closed_.sign_with_slot(kAttestationSlot, body);
    if (!open_.failed()) token.sig_trop = open_.sign_with_slot(kAttestationSlot, body);
    ++heartbeat_counter_;
    return token;
}

std::vector<SlotReport> SatelliteAgent::genesis_slot_reports() const {
    std::vector<SlotReport> reports;
    for (const SecureElement* e : {&closed_, &open_}) {
        if (e->failed()) continue;
        reports.push_back(e->attested_slot_report(kIdentitySlot));
        reports.push_back(e->attested_slot_report(kAttestationSlot));
    }
    return reports;
}

void SatelliteAgent::update_committee(const HandoverCertificate& handover) {
    if (handover.old_epoch != trust_store_.epoch()) {
        throw Error(ErrorCode::invalid_handover, "handover epoch mismatch");
    }
    const Bytes body = handover.signing_body();
    std::set<GsId> signers;
    for (const auto& [id, sig] : handover.signatures) {
        auto pk = trust_store_.find(id);
        if (!pk) continue;
        if (!verify(*pk, body, sig)) continue;
        signers.insert(id);
    }
    const int needed = options_.params.gs_fault_bound + 1;
    if (static_cast<int>(signers.size()) < needed) {
        throw Error(ErrorCode::invalid_handover, "insufficient valid signatures");
    }
    KeyRegistry next(trust_store_.epoch() + 1);
    for (const auto& [id, pk] : handover.new_committee) next.put(id, pk);
    trust_store_ = std::move(next);
    recompute_measurement();
}

} // namespace seap
