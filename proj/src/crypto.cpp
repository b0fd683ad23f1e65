#include "seap/crypto.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>
#include <set>
#include <sodium.h>

#include "seap/codec.hpp"

namespace seap {

namespace {

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0) throw std::runtime_error("libsodium initialization failed");
}

// Deterministic expansion used to fill suite encodings past the raw ed25519
// material (the published sizes model larger primitives; only their sizes and
// latencies matter here). Keyed per domain so pads are unique and any flipped
// pad byte is detectable.
Bytes pad_stream(const char* domain, std::span<const std::uint8_t> base, std::size_t n) {
    Bytes out;
    out.reserve(n);
    std::uint32_t counter = 0;
    while (out.size() < n) {
        Encoder enc;
        enc.str(domain);
        enc.bytes(base);
        enc.u32(counter++);
        Bytes block = enc.take();
        Hash32 h = sha256(block);
        for (std::uint8_t b : h) {
            if (out.size() == n) break;
            out.push_back(b);
        }
    }
    return out;
}

constexpr std::size_t kEd25519PublicBytes = 32;
constexpr std::size_t kEd25519SignatureBytes = 64;

const CryptoSuite kSuites[] = {
    {SuiteId::ecc_p256_class, "ecc-p256-class", 64, 64, {50, 100}},
    // ECC + Falcon-512 concatenation (64+897, 64+666). Falcon runs in
    // software on the single application core, so SE-parallel scheduling does
    // not shorten it; the per-op range reflects that envelope.
    {SuiteId::hybrid_ecc_falcon, "hybrid-ecc-falcon", 961, 730, {73, 245}},
    {SuiteId::falcon_only, "falcon-only", 897, 666, {73, 245}},
};

} // namespace

const CryptoSuite& CryptoSuite::get(SuiteId id) {
    for (const auto& s : kSuites) {
        if (s.id == id) return s;
    }
    throw Error(ErrorCode::unknown_kind, "unknown suite id");
}

const CryptoSuite& CryptoSuite::by_name(const std::string& name) {
    for (const auto& s : kSuites) {
        if (s.name == name) return s;
    }
    throw Error(ErrorCode::unknown_kind, "unknown suite: " + name);
}

PrivateHandle::~PrivateHandle() { destroy(); }

void PrivateHandle::destroy() {
    if (!secret_.empty()) {
        sodium_memzero(secret_.data(), secret_.size());
        secret_.clear();
    }
    alive_ = false;
}

namespace {

std::mutex g_guard_mutex;
bool g_guard_enabled = false;
std::set<Bytes> g_recorded_secrets;

} // namespace

void NonExportGuard::enable() {
    std::lock_guard<std::mutex> lock(g_guard_mutex);
    g_guard_enabled = true;
}

void NonExportGuard::record(const PrivateHandle& handle) {
    std::lock_guard<std::mutex> lock(g_guard_mutex);
    if (!g_guard_enabled || handle.secret_.empty()) return;
    // The first 32 bytes of an ed25519 secret key are the seed; the rest is
    // the public key. Scan for the seed half only.
    g_recorded_secrets.insert(Bytes(handle.secret_.begin(), handle.secret_.begin() + 32));
}

bool NonExportGuard::any_secret_in(std::span<const std::uint8_t> data) {
    std::lock_guard<std::mutex> lock(g_guard_mutex);
    for (const auto& secret : g_recorded_secrets) {
        if (contains_bytes(data, secret)) return true;
    }
    return false;
}

KeyPair generate_keypair(const CryptoSuite& suite, std::uint64_t seed) {
    ensure_sodium();
    Encoder enc;
    enc.str("seap/keygen/v1");
    enc.str(suite.name);
    enc.u64(seed);
    Bytes domain = enc.take();
    Hash32 kseed = sha256(domain);

    Bytes pk(crypto_sign_PUBLICKEYBYTES);
    auto handle = std::make_shared<PrivateHandle>();
    handle->secret_.resize(crypto_sign_SECRETKEYBYTES);
    crypto_sign_seed_keypair(pk.data(), handle->secret_.data(), kseed.data());
    NonExportGuard::record(*handle);

    KeyPair kp;
    kp.suite = suite.id;
    kp.public_key = pk;
    if (suite.public_key_bytes > kEd25519PublicBytes) {
        Bytes pad = pad_stream("seap/pk-pad/v1", pk, suite.public_key_bytes - kEd25519PublicBytes);
        kp.public_key.insert(kp.public_key.end(), pad.begin(), pad.end());
    }
    kp.private_handle = std::move(handle);
    return kp;
}

Bytes sign(const KeyPair& key, std::span<const std::uint8_t> message) {
    ensure_sodium();
    if (!key.private_handle || !key.private_handle->alive_) {
        throw Error(ErrorCode::deleted_key, "private handle was destroyed");
    }
    const CryptoSuite& suite = CryptoSuite::get(key.suite);
    Bytes sig(kEd25519SignatureBytes);
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                         key.private_handle->secret_.data());
    if (suite.signature_bytes > kEd25519SignatureBytes) {
        Bytes pad = pad_stream("seap/sig-pad/v1", sig, suite.signature_bytes - kEd25519SignatureBytes);
        sig.insert(sig.end(), pad.begin(), pad.end());
    }
    return sig;
}

bool verify(std::span<const std::uint8_t> public_key, std::span<const std::uint8_t> message,
            std::span<const std::uint8_t> signature) {
    ensure_sodium();
    bool known_sig_len = false;
    for (const auto& s : kSuites) {
        if (signature.size() == s.signature_bytes) known_sig_len = true;
    }
    if (!known_sig_len) {
        throw Error(ErrorCode::malformed_signature,
                    "signature length " + std::to_string(signature.size()));
    }
    bool known_pk_len = false;
    for (const auto& s : kSuites) {
        if (public_key.size() == s.public_key_bytes) known_pk_len = true;
    }
    if (!known_pk_len) {
        throw Error(ErrorCode::malformed_key, "public key length " + std::to_string(public_key.size()));
    }

    auto sig_core = signature.subspan(0, kEd25519SignatureBytes);
    if (signature.size() > kEd25519SignatureBytes) {
        Bytes expect = pad_stream("seap/sig-pad/v1", sig_core, signature.size() - kEd25519SignatureBytes);
        if (!std::equal(expect.begin(), expect.end(), signature.begin() + kEd25519SignatureBytes)) {
            return false;
        }
    }
    auto pk_core = public_key.subspan(0, kEd25519PublicBytes);
    if (public_key.size() > kEd25519PublicBytes) {
        Bytes expect = pad_stream("seap/pk-pad/v1", pk_core, public_key.size() - kEd25519PublicBytes);
        if (!std::equal(expect.begin(), expect.end(), public_key.begin() + kEd25519PublicBytes)) {
            return false;
        }
    }
    return crypto_sign_verify_detached(sig_core.data(), message.data(), message.size(),
                                       pk_core.data()) == 0;
}

const Bytes& KeyRegistry::require(GsId id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) {
        throw Error(ErrorCode::unknown_party, id.str() + " not in registry");
    }
    return it->second;
}

std::optional<Bytes> KeyRegistry::find(GsId id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

Bytes KeyRegistry::canonical_encoding() const {
    Encoder enc;
    enc.u32(epoch_);
    enc.u32(static_cast<std::uint32_t>(entries_.size()));
    for (const auto& [id, pk] : entries_) {
        enc.u32(id.value);
        enc.bytes(pk);
    }
    return enc.take();
}

} // namespace seap
