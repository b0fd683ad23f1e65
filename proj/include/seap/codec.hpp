#pragma once

#include <cstdint>

#include "seap/messages.hpp"

namespace seap {

enum class MessageKind { hello, hello_ack, key_verify, cert, eat };

const char* message_kind_name(MessageKind kind);

// Modeled wire size in bytes: fixed per-kind framing plus suite-dependent key
// and signature components, calibrated so per-exchange totals land on the
// published link-cost figures. The encoder pads every message to this size.
std::size_t wire_size(MessageKind kind, const CryptoSuite& suite,
                      std::size_t nonce_bytes = kDefaultNonceBytes,
                      std::size_t endorsement_count = 7);

// hello + hello-ack + key-verify for one full exchange.
std::size_t exchange_total_bytes(const CryptoSuite& suite,
                                 std::size_t nonce_bytes = kDefaultNonceBytes);

// One-time ML-KEM-768 channel-setup overhead (public key + ciphertext).
std::size_t mlkem_channel_setup_bytes();

// Canonical, deterministic, length-prefixed encoding. decode(encode(m)) == m;
// equal messages encode to identical bytes.
Bytes encode(const HelloMsg& m, const CryptoSuite& suite);
Bytes encode(const HelloAckMsg& m, const CryptoSuite& suite);
Bytes encode(const KeyVerifyMsg& m, const CryptoSuite& suite);
Bytes encode(const CertificateOfAuthorization& m, const CryptoSuite& suite);
Bytes encode(const EatToken& m, const CryptoSuite& suite);

MessageKind peek_kind(std::span<const std::uint8_t> wire); // throws malformed_message

HelloMsg decode_hello(std::span<const std::uint8_t> wire);
HelloAckMsg decode_hello_ack(std::span<const std::uint8_t> wire);
KeyVerifyMsg decode_key_verify(std::span<const std::uint8_t> wire);
CertificateOfAuthorization decode_cert(std::span<const std::uint8_t> wire);
EatToken decode_eat(std::span<const std::uint8_t> wire);

// Low-level canonical primitives, shared by message signing bodies and the
// registry/measurement encodings.
class Encoder {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void i64(std::int64_t v);
    void bytes(std::span<const std::uint8_t> v); // length-prefixed
    void raw(std::span<const std::uint8_t> v);   // no prefix
    void str(const std::string& s);

    Bytes take() { return std::move(out_); }
    std::size_t size() const { return out_.size(); }

private:
    Bytes out_;
};

class Decoder {
public:
    explicit Decoder(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::int64_t i64();
    Bytes bytes();
    Bytes raw(std::size_t n);
    std::string str();
    std::size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }

private:
    void need(std::size_t n);
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace seap
