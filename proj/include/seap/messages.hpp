#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seap/crypto.hpp"
#include "seap/secure_element.hpp"

namespace seap {

struct Nonce {
    Bytes value;

    friend bool operator==(const Nonce&, const Nonce&) = default;
    friend auto operator<=>(const Nonce&, const Nonce&) = default;
};

inline constexpr std::size_t kDefaultNonceBytes = 16; // lambda = 128

Nonce make_nonce(DetRng& rng, std::size_t nonce_bytes = kDefaultNonceBytes);

// hello: signed session opener from a ground station.
struct HelloMsg {
    Nonce nonce;
    GsId gs_id;
    Bytes signature; // over <nonce, "hello">

    friend bool operator==(const HelloMsg&, const HelloMsg&) = default;
    static Bytes signing_body(const Nonce& nonce);
};

// Evidence that a public key lives inside the attested environment: binds the
// key to a secure-element serial and a software measurement. The slot report
// inside covers the identity slot and therefore carries claimed_public_key;
// the codec writes that key once per anchor.
struct TeeQuote {
    Bytes claimed_public_key;
    std::string se_serial;
    SlotReport slot_report;
    Hash32 measurement_hash{};

    friend bool operator==(const TeeQuote&, const TeeQuote&) = default;
};

// hello-ack: satellite response. Degraded (single-anchor) mode leaves the
// failed anchor's fields absent.
struct HelloAckMsg {
    Nonce nonce;
    std::optional<Bytes> vk_nxp;
    std::optional<Bytes> vk_trop;
    std::optional<TeeQuote> quote_nxp;
    std::optional<TeeQuote> quote_trop;
    std::optional<Bytes> sig_nonce_nxp;
    std::optional<Bytes> sig_nonce_trop;

    friend bool operator==(const HelloAckMsg&, const HelloAckMsg&) = default;

    // The key the ground station endorses: the closed anchor's identity key,
    // or the surviving anchor's in degraded mode.
    const Bytes& primary_vk() const;
    static Bytes nonce_signing_body(const Nonce& nonce);
};

// key-verify: a ground station's timestamped endorsement of vk_S.
struct KeyVerifyMsg {
    std::int64_t timestamp_ms = 0;
    Bytes signature; // over <vk_S, timestamp>
    GsId gs_id;

    friend bool operator==(const KeyVerifyMsg&, const KeyVerifyMsg&) = default;
    static Bytes signing_body(std::span<const std::uint8_t> vk_s, std::int64_t timestamp_ms);
};

// One accepted key-verify, as stored in the satellite log L.
struct EndorsementRecord {
    std::int64_t ts_ms = 0;
    GsId gs_id;
    Bytes signature;

    friend bool operator==(const EndorsementRecord&, const EndorsementRecord&) = default;
    friend auto operator<=>(const EndorsementRecord&, const EndorsementRecord&) = default;
};

// Quorum artifact: exactly t_GS + 2*t_ch + 1 endorsements from distinct
// ground stations, counter-signed inside the TEE. Timestamps ride along so
// any relying party can re-verify the endorsement signatures.
struct CertificateOfAuthorization {
    Bytes vk_s;
    std::vector<EndorsementRecord> endorsements;
    Bytes tee_signature;

    friend bool operator==(const CertificateOfAuthorization&, const CertificateOfAuthorization&) = default;
    Bytes signing_body() const; // canonical <vk_s, endorsements>
};

// Nonce-bound attestation evidence co-signed by the two anchors.
struct EatToken {
    Nonce nonce;
    Hash32 measurement_hash{};
    std::array<std::string, 2> se_serials; // {closed anchor, open anchor}
    std::optional<Bytes> sig_nxp;
    std::optional<Bytes> sig_trop;
    std::int64_t issued_at_ms = 0;
    bool degraded = false;

    friend bool operator==(const EatToken&, const EatToken&) = default;
    Bytes signing_body() const; // identical body for both signatures
};

// Committee-epoch transition, signed by >= t_GS + 1 outgoing members.
struct HandoverCertificate {
    std::vector<std::pair<GsId, Bytes>> new_committee; // (id, public key)
    std::vector<std::pair<GsId, Bytes>> signatures;    // (id, signature)
    std::uint32_t old_epoch = 0;

    friend bool operator==(const HandoverCertificate&, const HandoverCertificate&) = default;
    Bytes signing_body() const; // canonical <new_committee, old_epoch>
};

} // namespace seap
