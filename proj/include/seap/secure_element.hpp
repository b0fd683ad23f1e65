#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "seap/crypto.hpp"
#include "seap/det_rng.hpp"

namespace seap {

enum class AnchorVendor { closed_anchor, open_anchor };

enum class SlotState { empty, occupied };

struct SecureElementSlot {
    int slot_index = 0;
    SlotState state = SlotState::empty;
    std::optional<KeyPair> key;
    bool origin_internal = false;
    bool non_exportable = false;
};

// Attested object attribute report: describes a key slot, signed by the
// element's attestation key. The serial inside is always the element's own —
// the simulator never lets anyone mint a report for hardware they do not
// hold, which is the honest-crypto stand-in for the vendor report mechanism.
struct SlotReport {
    std::string serial;
    int slot_index = 0;
    bool origin_internal = false;
    bool non_exportable = false;
    Bytes public_key; // the reported slot's public key
    Bytes signature;  // by the element's attestation key

    friend bool operator==(const SlotReport&, const SlotReport&) = default;
    Bytes signing_body() const;
};

inline constexpr int kIdentitySlot = 0;
inline constexpr int kAttestationSlot = 1;

// Abstract dual-role secure element: two non-exportable key slots (identity,
// attestation), a monotonic counter, and a one-shot on-orbit genesis.
class SecureElement {
public:
    SecureElement(AnchorVendor vendor, std::string serial)
        : vendor_(vendor), serial_(std::move(serial)) {
        slots_[0].slot_index = 0;
        slots_[1].slot_index = 1;
    }

    AnchorVendor vendor() const { return vendor_; }
    const std::string& serial() const { return serial_; }
    std::uint64_t monotonic_counter() const { return monotonic_counter_; }
    bool failed() const { return failed_; }
    void mark_failed() { failed_ = true; } // simulated radiation / supply-chain fault

    const SecureElementSlot& slot(int index) const;
    bool any_slot_occupied() const;

    struct GenesisResult {
        Bytes identity_public;
        Bytes attestation_public;
    };

    // Generates both slot keys internally. Fails if any slot is already
    // occupied (premature pre-launch generation) or the element failed.
    GenesisResult genesis(const CryptoSuite& suite, DetRng& rng);

    // Signs with the given slot's key. Throws empty_slot / failed_element.
    Bytes sign_with_slot(int slot_index, std::span<const std::uint8_t> message) const;

    // Signed attribute report for an occupied slot.
    SlotReport attested_slot_report(int slot_index) const;

private:
    AnchorVendor vendor_;
    std::string serial_;
    std::array<SecureElementSlot, 2> slots_;
    std::uint64_t monotonic_counter_ = 0;
    bool failed_ = false;
};

// Verifies a slot report's signature chain against the attestation public key
// it claims (carried out-of-band or pinned by the verifier).
bool verify_slot_report(const SlotReport& report, std::span<const std::uint8_t> attestation_public);

} // namespace seap
