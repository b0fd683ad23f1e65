#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "seap/ground_station.hpp"

namespace seap {

// One committee epoch. t_GS is derived from the adversarial fraction.
struct Committee {
    std::uint32_t epoch = 0;
    std::vector<std::pair<GsId, Bytes>> members;
    int t_percent = 0;

    int gs_fault_bound() const { // floor(t/100 * n)
        return static_cast<int>((static_cast<long long>(t_percent) * static_cast<long long>(members.size())) / 100);
    }
    KeyRegistry registry() const;
};

struct CommitteeChain {
    std::vector<Committee> epochs;
    std::vector<HandoverCertificate> handovers; // links epoch i -> i+1
};

// Collects handover signatures from the given signers (all members of `old`).
// Returns the certificate iff at least t_GS + 1 distinct valid signatures
// were collected, absent otherwise. Throws config_invalid on an empty new
// committee. Signer keys are looked up through `signer_key`, which returns
// the live keypair of an old-committee member willing to sign.
std::optional<HandoverCertificate> propose_and_sign_handover(
    const Committee& old_committee, const std::vector<std::pair<GsId, Bytes>>& new_members,
    const std::vector<GsId>& signers,
    const std::function<const KeyPair*(GsId)>& signer_key);

// True iff every link's signatures verify under the prior epoch's keys with
// at least t_GS + 1 distinct signers, and each link's member list matches the
// next epoch.
bool verify_handover_chain(const CommitteeChain& chain, const Committee& genesis);

} // namespace seap
