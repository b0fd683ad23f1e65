#include "seap/committee.hpp"

#include <set>

namespace seap {

KeyRegistry Committee::registry() const {
    KeyRegistry reg(epoch);
    for (const auto& [id, pk] : members) reg.put(id, pk);
    return reg;
}

std::optional<HandoverCertificate> propose_and_sign_handover(
    const Committee& old_committee, const std::vector<std::pair<GsId, Bytes>>& new_members,
    const std::vector<GsId>& signers,
    const std::function<const KeyPair*(GsId)>& signer_key) {
    if (new_members.empty()) {
        throw Error(ErrorCode::config_invalid, "empty new committee");
    }
    HandoverCertificate cert;
    cert.new_committee = new_members;
    cert.old_epoch = old_committee.epoch;
    const Bytes body = cert.signing_body();
    const KeyRegistry old_registry = old_committee.registry();

    std::set<GsId> distinct;
    for (GsId id : signers) {
        if (!old_registry.has(id)) continue;
        if (!distinct.insert(id).second) continue;
        const KeyPair* key = signer_key(id);
        if (key == nullptr) {
            distinct.erase(id);
            continue;
        }
        Bytes sig = sign(*key, body); // throws deleted_key on a rotated-away key
        if (!verify(old_registry.require(id), body, sig)) {
            distinct.erase(id);
            continue; // signer's live key is not its registered epoch key
        }
        cert.signatures.emplace_back(id, std::move(sig));
    }
    if (static_cast<int>(distinct.size()) < old_committee.gs_fault_bound() + 1) {
        return std::nullopt; // insufficient-signatures
    }
    return cert;
}

namespace {

bool verify_handover_link(const HandoverCertificate& handover, const Committee& from,
                          const Committee& to) {
    if (handover.old_epoch != from.epoch) return false;
    if (handover.new_committee != to.members) return false;
    const Bytes body = handover.signing_body();
    const KeyRegistry registry = from.registry();
    std::set<GsId> distinct;
    for (const auto& [id, sig] : handover.signatures) {
        auto pk = registry.find(id);
        if (!pk) return false; // signer outside the outgoing committee
        if (!verify(*pk, body, sig)) return false;
        if (!distinct.insert(id).second) return false; // duplicate signer
    }
    return static_cast<int>(distinct.size()) >= from.gs_fault_bound() + 1;
}

} // namespace

bool verify_handover_chain(const CommitteeChain& chain, const Committee& genesis) {
    if (chain.epochs.empty()) return false;
    if (chain.epochs.front().epoch != genesis.epoch ||
        chain.epochs.front().members != genesis.members) {
        return false;
    }
    if (chain.handovers.size() + 1 != chain.epochs.size()) return false;
    for (std::size_t i = 0; i + 1 < chain.epochs.size(); ++i) {
        if (chain.epochs[i + 1].epoch != chain.epochs[i].epoch + 1) return false;
        if (!verify_handover_link(chain.handovers[i], chain.epochs[i], chain.epochs[i + 1])) {
            return false;
        }
    }
    return true;
}

} // namespace seap
