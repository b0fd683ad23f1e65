#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "seap/bytes.hpp"
#include "seap/errors.hpp"

namespace seap {

struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;

    friend bool operator==(const IntRange&, const IntRange&) = default;
    bool contains(std::int64_t v) const { return v >= lo && v <= hi; }
    IntRange operator+(const IntRange& o) const { return {lo + o.lo, hi + o.hi}; }
    IntRange operator*(std::int64_t k) const { return {lo * k, hi * k}; }
};

enum class SuiteId { ecc_p256_class, hybrid_ecc_falcon, falcon_only };

// Signature-suite size/latency parameters. Sizes follow the published
// ECC-P256 / Falcon-512 / ML-KEM-768 primitive sizes; the hybrid suite is the
// concatenation of the ECC and Falcon components.
struct CryptoSuite {
    SuiteId id;
    std::string name;
    std::size_t public_key_bytes;
    std::size_t signature_bytes;
    IntRange sign_latency_ms;

    static const CryptoSuite& get(SuiteId id);
    static const CryptoSuite& by_name(const std::string& name); // throws unknown_kind
};

// ML-KEM-768 encapsulation sizes, used by the channel-setup bandwidth model.
inline constexpr std::size_t kMlKem768PublicKeyBytes = 1184;
inline constexpr std::size_t kMlKem768CiphertextBytes = 1088;

// Party identifier for a ground station.
struct GsId {
    std::uint32_t value = 0;

    auto operator<=>(const GsId&) const = default;
    std::string str() const { return "gs-" + std::to_string(value); }
};

struct KeyPair;

// Owner of live private key material. Never serialized; tombstoned on key
// rotation so stale handles cannot sign.
class PrivateHandle {
public:
    ~PrivateHandle();

    bool alive() const { return alive_; }
    void destroy();

private:
    friend KeyPair generate_keypair(const CryptoSuite&, std::uint64_t);
    friend Bytes sign(const KeyPair&, std::span<const std::uint8_t>);
    friend class NonExportGuard;

    Bytes secret_; // libsodium ed25519 secret key (64 bytes)
    bool alive_ = true;
};

struct KeyPair {
    SuiteId suite = SuiteId::ecc_p256_class;
    Bytes public_key;
    std::shared_ptr<PrivateHandle> private_handle;

    bool live() const { return private_handle && private_handle->alive(); }
};

// Deterministic key generation: same (suite, seed) yields the same pair.
KeyPair generate_keypair(const CryptoSuite& suite, std::uint64_t seed);

// Signs `message`; output length is the suite's signature size.
// Throws deleted_key if the private handle was tombstoned.
Bytes sign(const KeyPair& key, std::span<const std::uint8_t> message);

// True iff `signature` was produced over exactly `message` by the holder of
// `public_key`. Throws malformed_signature / malformed_key on bad lengths.
bool verify(std::span<const std::uint8_t> public_key, std::span<const std::uint8_t> message,
            std::span<const std::uint8_t> signature);

// Collects raw ed25519 secrets of generated keys so tests can scan serialized
// artifacts for leaked private material. Enabled only from tests.
class NonExportGuard {
public:
    static void enable();
    static void record(const PrivateHandle& handle);
    static bool any_secret_in(std::span<const std::uint8_t> data);
};

// Registry of party public keys for one committee epoch.
class KeyRegistry {
public:
    KeyRegistry() = default;
    explicit KeyRegistry(std::uint32_t epoch) : epoch_(epoch) {}

    void put(GsId id, Bytes public_key) { entries_[id] = std::move(public_key); }
    bool has(GsId id) const { return entries_.count(id) != 0; }
    std::size_t size() const { return entries_.size(); }
    std::uint32_t epoch() const { return epoch_; }
    void set_epoch(std::uint32_t e) { epoch_ = e; }

    // Throws unknown_party for unregistered identifiers.
    const Bytes& require(GsId id) const;
    std::optional<Bytes> find(GsId id) const;

    const std::map<GsId, Bytes>& entries() const { return entries_; }

    // Canonical encoding (epoch + sorted entries); feeds the TEE measurement.
    Bytes canonical_encoding() const;

private:
    std::map<GsId, Bytes> entries_;
    std::uint32_t epoch_ = 0;
};

} // namespace seap
