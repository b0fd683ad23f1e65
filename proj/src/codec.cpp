#include "seap/codec.hpp"

namespace seap {

namespace {

constexpr std::uint8_t kVersion = 1;

std::uint8_t kind_tag(MessageKind kind) {
    switch (kind) {
        case MessageKind::hello: return 1;
        case MessageKind::hello_ack: return 2;
        case MessageKind::key_verify: return 3;
        case MessageKind::cert: return 4;
        case MessageKind::eat: return 5;
    }
    throw Error(ErrorCode::unknown_kind, "message kind");
}

MessageKind kind_from_tag(std::uint8_t tag) {
    switch (tag) {
        case 1: return MessageKind::hello;
        case 2: return MessageKind::hello_ack;
        case 3: return MessageKind::key_verify;
        case 4: return MessageKind::cert;
        case 5: return MessageKind::eat;
    }
    throw Error(ErrorCode::malformed_message, "bad kind tag");
}

// Frames a body: kind, version, body, then zero padding up to the modeled
// wire size so trace byte counts match the link-cost model.
Bytes frame(MessageKind kind, Bytes body, std::size_t target) {
    Encoder enc;
    enc.u8(kind_tag(kind));
    enc.u8(kVersion);
    enc.raw(body);
    std::size_t raw = enc.size() + 4; // plus the pad-length word
    std::size_t pad = target > raw ? target - raw : 0;
    enc.u32(static_cast<std::uint32_t>(pad));
    Bytes out = enc.take();
    out.resize(out.size() + pad, 0);
    return out;
}

// Strips kind and version, returning body plus pad trailer. The body is
// self-delimiting; finish_frame() validates the trailer after parsing.
std::span<const std::uint8_t> unframe(std::span<const std::uint8_t> wire, MessageKind expect) {
    if (wire.size() < 6) throw Error(ErrorCode::malformed_message, "short frame");
    if (kind_from_tag(wire[0]) != expect) throw Error(ErrorCode::malformed_message, "kind mismatch");
    if (wire[1] != kVersion) throw Error(ErrorCode::malformed_message, "bad version");
    return wire.subspan(2);
}

// Reads the pad trailer after `dec` consumed the body; all pad bytes must be
// zero for canonicity.
void finish_frame(Decoder& dec) {
    std::uint32_t pad = dec.u32();
    if (dec.remaining() != pad) throw Error(ErrorCode::malformed_message, "pad length mismatch");
    Bytes padding = dec.raw(pad);
    for (std::uint8_t b : padding) {
        if (b != 0) throw Error(ErrorCode::malformed_message, "nonzero padding");
    }
}

void put_optional_bytes(Encoder& enc, const std::optional<Bytes>& v) {
    enc.u8(v.has_value() ? 1 : 0);
    if (v) enc.bytes(*v);
}

std::optional<Bytes> get_optional_bytes(Decoder& dec) {
    if (dec.u8() == 0) return std::nullopt;
    return dec.bytes();
}

// A quote inside a hello-ack covers the anchor's identity key, which the
// hello-ack already carries; the key bytes are written once per anchor.
void put_quote(Encoder& enc, const TeeQuote& q, const Bytes& anchor_vk) {
    if (q.claimed_public_key != anchor_vk || q.slot_report.public_key != anchor_vk) {
        throw Error(ErrorCode::malformed_message, "quote key does not match carried vk");
    }
    if (q.slot_report.serial != q.se_serial) {
        throw Error(ErrorCode::malformed_message, "quote/report serial mismatch");
    }
    enc.str(q.se_serial);
    enc.u8(static_cast<std::uint8_t>(q.slot_report.slot_index));
    enc.u8(q.slot_report.origin_internal ? 1 : 0);
    enc.u8(q.slot_report.non_exportable ? 1 : 0);
    enc.bytes(q.slot_report.signature);
    enc.raw(q.measurement_hash);
}

TeeQuote get_quote(Decoder& dec, const Bytes& anchor_vk) {
    TeeQuote q;
    q.se_serial = dec.str();
    q.slot_report.serial = q.se_serial;
    q.slot_report.slot_index = dec.u8();
    q.slot_report.origin_internal = dec.u8() != 0;
    q.slot_report.non_exportable = dec.u8() != 0;
    q.slot_report.signature = dec.bytes();
    Bytes m = dec.raw(32);
    std::copy(m.begin(), m.end(), q.measurement_hash.begin());
    q.claimed_public_key = anchor_vk;
    q.slot_report.public_key = anchor_vk;
    return q;
}

} // namespace

const char* message_kind_name(MessageKind kind) {
    switch (kind) {
        case MessageKind::hello: return "hello";
        case MessageKind::hello_ack: return "hello-ack";
        case MessageKind::key_verify: return "key-verify";
        case MessageKind::cert: return "cert";
        case MessageKind::eat: return "eat";
    }
    return "unknown";
}

std::size_t wire_size(MessageKind kind, const CryptoSuite& suite, std::size_t nonce_bytes,
                      std::size_t endorsement_count) {
    const std::size_t P = suite.public_key_bytes;
    const std::size_t S = suite.signature_bytes;
    switch (kind) {
        case MessageKind::hello:
            return 112 + nonce_bytes + 8 + S;
        case MessageKind::key_verify:
            return 70 + 8 + 8 + S;
        case MessageKind::hello_ack:
            // Two identity keys, two quotes, two nonce signatures plus the
            // framing/metadata residue calibrated against the published
            // per-exchange figures.
            return 1100 + nonce_bytes + 2 * P + 4 * S;
        case MessageKind::cert:
            return 1756 + P + S + endorsement_count * (S + 24);
        case MessageKind::eat:
            return 0; // not padded; raw encoding
    }
    throw Error(ErrorCode::unknown_kind, "message kind");
}

std::size_t exchange_total_bytes(const CryptoSuite& suite, std::size_t nonce_bytes) {
    return wire_size(MessageKind::hello, suite, nonce_bytes) +
           wire_size(MessageKind::hello_ack, suite, nonce_bytes) +
           wire_size(MessageKind::key_verify, suite, nonce_bytes);
}

std::size_t mlkem_channel_setup_bytes() {
    return kMlKem768PublicKeyBytes + kMlKem768CiphertextBytes;
}

void Encoder::u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Encoder::u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Encoder::i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

void Encoder::bytes(std::span<const std::uint8_t> v) {
    u32(static_cast<std::uint32_t>(v.size()));
    raw(v);
}

void Encoder::raw(std::span<const std::uint8_t> v) { out_.insert(out_.end(), v.begin(), v.end()); }

void Encoder::str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
}

void Decoder::need(std::size_t n) {
    if (data_.size() - pos_ < n) throw Error(ErrorCode::malformed_message, "truncated");
}

std::uint8_t Decoder::u8() {
    need(1);
    return data_[pos_++];
}

std::uint32_t Decoder::u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
}

std::uint64_t Decoder::u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(data_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
}

std::int64_t Decoder::i64() { return static_cast<std::int64_t>(u64()); }

Bytes Decoder::bytes() {
    std::uint32_t n = u32();
    return raw(n);
}

Bytes Decoder::raw(std::size_t n) {
    need(n);
    Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
    pos_ += n;
    return out;
}

std::string Decoder::str() {
    std::uint32_t n = u32();
    need(n);
    std::string out(data_.begin() + pos_, data_.begin() + pos_ + n);
    pos_ += n;
    return out;
}

MessageKind peek_kind(std::span<const std::uint8_t> wire) {
    if (wire.empty()) throw Error(ErrorCode::malformed_message, "empty");
    return kind_from_tag(wire[0]);
}

Nonce make_nonce(DetRng& rng, std::size_t nonce_bytes) { return Nonce{rng.bytes(nonce_bytes)}; }

Bytes HelloMsg::signing_body(const Nonce& nonce) {
    Encoder enc;
    enc.str("seap/hello/v1");
    enc.bytes(nonce.value);
    return enc.take();
}

Bytes HelloAckMsg::nonce_signing_body(const Nonce& nonce) {
    Encoder enc;
    enc.str("seap/ack-nonce/v1");
    enc.bytes(nonce.value);
    return enc.take();
}

const Bytes& HelloAckMsg::primary_vk() const {
    if (vk_nxp) return *vk_nxp;
    if (vk_trop) return *vk_trop;
    throw Error(ErrorCode::malformed_message, "hello-ack carries no identity key");
}

Bytes KeyVerifyMsg::signing_body(std::span<const std::uint8_t> vk_s, std::int64_t timestamp_ms) {
    Encoder enc;
    enc.str("seap/key-verify/v1");
    enc.bytes(vk_s);
    enc.i64(timestamp_ms);
    return enc.take();
}

Bytes CertificateOfAuthorization::signing_body() const {
    Encoder enc;
    enc.str("seap/cert/v1");
    enc.bytes(vk_s);
    enc.u32(static_cast<std::uint32_t>(endorsements.size()));
    for (const auto& e : endorsements) {
        enc.i64(e.ts_ms);
        enc.u32(e.gs_id.value);
        enc.bytes(e.signature);
    }
    return enc.take();
}

Bytes EatToken::signing_body() const {
    Encoder enc;
    enc.str("seap/eat/v1");
    enc.bytes(nonce.value);
    enc.raw(measurement_hash);
    enc.str(se_serials[0]);
    enc.str(se_serials[1]);
    enc.i64(issued_at_ms);
    enc.u8(degraded ? 1 : 0);
    return enc.take();
}

Bytes HandoverCertificate::signing_body() const {
    Encoder enc;
    enc.str("seap/handover/v1");
    enc.u32(old_epoch);
    enc.u32(static_cast<std::uint32_t>(new_committee.size()));
    for (const auto& [id, pk] : new_committee) {
        enc.u32(id.value);
        enc.bytes(pk);
    }
    return enc.take();
}

Bytes encode(const HelloMsg& m, const CryptoSuite& suite) {
    Encoder enc;
    enc.bytes(m.nonce.value);
    enc.u32(m.gs_id.value);
    enc.bytes(m.signature);
    return frame(MessageKind::hello, enc.take(),
                 wire_size(MessageKind::hello, suite, m.nonce.value.size()));
}

HelloMsg decode_hello(std::span<const std::uint8_t> wire) {
    Decoder dec(unframe(wire, MessageKind::hello));
    HelloMsg m;
    m.nonce.value = dec.bytes();
    m.gs_id.value = dec.u32();
    m.signature = dec.bytes();
    finish_frame(dec);
    return m;
}

Bytes encode(const HelloAckMsg& m, const CryptoSuite& suite) {
    Encoder enc;
    enc.bytes(m.nonce.value);
    put_optional_bytes(enc, m.vk_nxp);
    enc.u8(m.quote_nxp.has_value() ? 1 : 0);
    if (m.quote_nxp) {
        if (!m.vk_nxp) throw Error(ErrorCode::malformed_message, "quote without vk");
        put_quote(enc, *m.quote_nxp, *m.vk_nxp);
    }
    put_optional_bytes(enc, m.sig_nonce_nxp);
    put_optional_bytes(enc, m.vk_trop);
    enc.u8(m.quote_trop.has_value() ? 1 : 0);
    if (m.quote_trop) {
        if (!m.vk_trop) throw Error(ErrorCode::malformed_message, "quote without vk");
        put_quote(enc, *m.quote_trop, *m.vk_trop);
    }
    put_optional_bytes(enc, m.sig_nonce_trop);
    return frame(MessageKind::hello_ack, enc.take(),
                 wire_size(MessageKind::hello_ack, suite, m.nonce.value.size()));
}

HelloAckMsg decode_hello_ack(std::span<const std::uint8_t> wire) {
    Decoder dec(unframe(wire, MessageKind::hello_ack));
    HelloAckMsg m;
    m.nonce.value = dec.bytes();
    m.vk_nxp = get_optional_bytes(dec);
    if (dec.u8() != 0) {
        if (!m.vk_nxp) throw Error(ErrorCode::malformed_message, "quote without vk");
        m.quote_nxp = get_quote(dec, *m.vk_nxp);
    }
    m.sig_nonce_nxp = get_optional_bytes(dec);
    m.vk_trop = get_optional_bytes(dec);
    if (dec.u8() != 0) {
        if (!m.vk_trop) throw Error(ErrorCode::malformed_message, "quote without vk");
        m.quote_trop = get_quote(dec, *m.vk_trop);
    }
    m.sig_nonce_trop = get_optional_bytes(dec);
    finish_frame(dec);
    return m;
}

Bytes encode(const KeyVerifyMsg& m, const CryptoSuite& suite) {
    Encoder enc;
    enc.i64(m.timestamp_ms);
    enc.u32(m.gs_id.value);
    enc.bytes(m.signature);
    return frame(MessageKind::key_verify, enc.take(), wire_size(MessageKind::key_verify, suite));
}

KeyVerifyMsg decode_key_verify(std::span<const std::uint8_t> wire) {
    Decoder dec(unframe(wire, MessageKind::key_verify));
    KeyVerifyMsg m;
    m.timestamp_ms = dec.i64();
    m.gs_id.value = dec.u32();
    m.signature = dec.bytes();
    finish_frame(dec);
    return m;
}

Bytes encode(const CertificateOfAuthorization& m, const CryptoSuite& suite) {
    Encoder enc;
    enc.bytes(m.vk_s);
    enc.u32(static_cast<std::uint32_t>(m.endorsements.size()));
    for (const auto& e : m.endorsements) {
        enc.i64(e.ts_ms);
        enc.u32(e.gs_id.value);
        enc.bytes(e.signature);
    }
    enc.bytes(m.tee_signature);
    return frame(MessageKind::cert, enc.take(),
                 wire_size(MessageKind::cert, suite, kDefaultNonceBytes, m.endorsements.size()));
}

CertificateOfAuthorization decode_cert(std::span<const std::uint8_t> wire) {
    Decoder dec(unframe(wire, MessageKind::cert));
    CertificateOfAuthorization m;
    m.vk_s = dec.bytes();
    std::uint32_t n = dec.u32();
    if (n > 4096) throw Error(ErrorCode::malformed_message, "endorsement count");
    m.endorsements.resize(n);
    for (auto& e : m.endorsements) {
        e.ts_ms = dec.i64();
        e.gs_id.value = dec.u32();
        e.signature = dec.bytes();
    }
    m.tee_signature = dec.bytes();
    finish_frame(dec);
    return m;
}

Bytes encode(const EatToken& m, const CryptoSuite& suite) {
    (void)suite;
    Encoder enc;
    enc.bytes(m.nonce.value);
    enc.raw(m.measurement_hash);
    enc.str(m.se_serials[0]);
    enc.str(m.se_serials[1]);
    put_optional_bytes(enc, m.sig_nxp);
    put_optional_bytes(enc, m.sig_trop);
    enc.i64(m.issued_at_ms);
    enc.u8(m.degraded ? 1 : 0);
    return frame(MessageKind::eat, enc.take(), 0);
}

EatToken decode_eat(std::span<const std::uint8_t> wire) {
    Decoder dec(unframe(wire, MessageKind::eat));
    EatToken m;
    m.nonce.value = dec.bytes();
    Bytes h = dec.raw(32);
    std::copy(h.begin(), h.end(), m.measurement_hash.begin());
    m.se_serials[0] = dec.str();
    m.se_serials[1] = dec.str();
    m.sig_nxp = get_optional_bytes(dec);
    m.sig_trop = get_optional_bytes(dec);
    m.issued_at_ms = dec.i64();
    m.degraded = dec.u8() != 0;
    finish_frame(dec);
    return m;
}

} // namespace seap
