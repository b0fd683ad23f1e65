#include "seap/secure_element.hpp"

#include "seap/codec.hpp"

namespace seap {

Bytes SlotReport::signing_body() const {
    Encoder enc;
    enc.str("seap/slot-report/v1");
    enc.str(serial);
    enc.u8(static_cast<std::uint8_t>(slot_index));
    enc.u8(origin_internal ? 1 : 0);
    enc.u8(non_exportable ? 1 : 0);
    enc.bytes(public_key);
    return enc.take();
}

const SecureElementSlot& SecureElement::slot(int index) const {
    return slots_.at(static_cast<std::size_t>(index));
}

bool SecureElement::any_slot_occupied() const {
    return slots_[0].state == SlotState::occupied || slots_[1].state == SlotState::occupied;
}

SecureElement::GenesisResult SecureElement::genesis(const CryptoSuite& suite, DetRng& rng) {
    if (failed_) {
        throw Error(ErrorCode::failed_element, "genesis on failed element " + serial_);
    }
    if (any_slot_occupied()) {
        throw Error(ErrorCode::slots_occupied, "key slots not empty on element " + serial_);
    }
    for (auto& s : slots_) {
        s.key = generate_keypair(suite, rng.next_u64());
        s.state = SlotState::occupied;
        s.origin_internal = true;
        s.non_exportable = true;
    }
    ++monotonic_counter_;
    return {slots_[kIdentitySlot].key->public_key, slots_[kAttestationSlot].key->public_key};
}

Bytes SecureElement::sign_with_slot(int slot_index, std::span<const std::uint8_t> message) const {
    if (failed_) {
        throw Error(ErrorCode::failed_element, "sign on failed element " + serial_);
    }
    const auto& s = slot(slot_index);
    if (s.state != SlotState::occupied) {
        throw Error(ErrorCode::empty_slot, "sign with empty slot");
    }
    return sign(*s.key, message);
}

SlotReport SecureElement::attested_slot_report(int slot_index) const {
    const auto& s = slot(slot_index);
    if (s.state != SlotState::occupied) {
        throw Error(ErrorCode::empty_slot, "report on empty slot");
    }
    SlotReport report;
    report.serial = serial_;
    report.slot_index = s.slot_index;
    report.origin_internal = s.origin_internal;
    report.non_exportable = s.non_exportable;
    report.public_key = s.key->public_key;
    report.signature = sign_with_slot(kAttestationSlot, report.signing_body());
    return report;
}

bool verify_slot_report(const SlotReport& report, std::span<const std::uint8_t> attestation_public) {
    return verify(attestation_public, report.signing_body(), report.signature);
}

} // namespace seap
