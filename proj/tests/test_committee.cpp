#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "seap/committee.hpp"
#include "seap/satellite.hpp"

using namespace seap;

namespace {

struct CommitteeFixture {
    CryptoSuite suite = CryptoSuite::get(SuiteId::ecc_p256_class);
    std::vector<std::unique_ptr<GsAgent>> agents;
    Committee committee;

    CommitteeFixture(int n, int t_percent, DetRng& rng, std::uint32_t epoch = 0,
                     std::uint32_t first_id = 0) {
        committee.epoch = epoch;
        committee.t_percent = t_percent;
        for (int i = 0; i < n; ++i) {
            GsId id{first_id + static_cast<std::uint32_t>(i)};
            KeyPair kp = generate_keypair(suite, rng.next_u64());
            committee.members.emplace_back(id, kp.public_key);
            agents.push_back(
                std::make_unique<GsAgent>(id, kp, KeyRegistry(epoch), 6000, VerifierPolicy{}));
        }
    }

    GsAgent* find(GsId id) {
        for (auto& a : agents) {
            if (a->id() == id) return a.get();
        }
        return nullptr;
    }

    std::function<const KeyPair*(GsId)> live_keys() {
        return [this](GsId id) -> const KeyPair* {
            GsAgent* a = find(id);
            return a ? &a->keypair() : nullptr;
        };
    }
};

std::vector<std::pair<GsId, Bytes>> fresh_members(int n, std::uint32_t first_id, DetRng& rng) {
    std::vector<std::pair<GsId, Bytes>> out;
    for (int i = 0; i < n; ++i) {
        out.emplace_back(GsId{first_id + static_cast<std::uint32_t>(i)},
                         generate_keypair(CryptoSuite::get(SuiteId::ecc_p256_class), rng.next_u64())
                             .public_key);
    }
    return out;
}

} // namespace

TEST_CASE("fault bound follows floor(t/100 * n)") {
    DetRng rng(1);
    CommitteeFixture f(10, 40, rng);
    CHECK(f.committee.gs_fault_bound() == 4);
    CommitteeFixture g(7, 33, rng);
    CHECK(g.committee.gs_fault_bound() == 2); // floor(2.31)
    CommitteeFixture h(30, 40, rng);
    CHECK(h.committee.gs_fault_bound() == 12);
}

TEST_CASE("handover needs t_GS + 1 distinct signers") {
    DetRng rng(2);
    CommitteeFixture f(10, 40, rng); // t_GS = 4, needs 5
    auto next = fresh_members(12, 100, rng);

    SUBCASE("six willing signers produce a certificate") {
        std::vector<GsId> signers;
        for (int i = 0; i < 6; ++i) signers.push_back(GsId{static_cast<std::uint32_t>(i)});
        auto cert = propose_and_sign_handover(f.committee, next, signers, f.live_keys());
        REQUIRE(cert.has_value());
        CHECK(cert->signatures.size() == 6);
        CHECK(cert->old_epoch == 0);
        CHECK(cert->new_committee == next);
    }

    SUBCASE("majority-adversarial committees cannot hand over") {
        CommitteeFixture g(10, 60, rng); // t_GS = 6, needs 7, only 4 honest
        std::vector<GsId> signers;
        for (int i = 0; i < 4; ++i) signers.push_back(GsId{static_cast<std::uint32_t>(i)});
        CHECK_FALSE(propose_and_sign_handover(g.committee, next, signers, g.live_keys()).has_value());
    }

    SUBCASE("duplicate signers count once") {
        std::vector<GsId> signers(10, GsId{3});
        CHECK_FALSE(propose_and_sign_handover(f.committee, next, signers, f.live_keys()).has_value());
    }

    SUBCASE("an empty new committee is an input error") {
        CHECK_THROWS_AS(
            propose_and_sign_handover(f.committee, {}, {GsId{0}}, f.live_keys()), Error);
    }
}

TEST_CASE("handover success boundary across the parameter sweep") {
    DetRng rng(3);
    for (int n = 4; n <= 30; n += 2) {
        for (int t : {10, 20, 30, 40, 50, 60}) {
            CommitteeFixture f(n, t, rng);
            auto next = fresh_members(n, 200, rng);
            const int needed = f.committee.gs_fault_bound() + 1;

            std::vector<GsId> enough;
            for (int i = 0; i < needed && i < n; ++i) enough.push_back(GsId{static_cast<std::uint32_t>(i)});
            std::vector<GsId> short_one(enough.begin(), enough.end() - 1);

            auto yes = propose_and_sign_handover(f.committee, next, enough, f.live_keys());
            auto no = propose_and_sign_handover(f.committee, next, short_one, f.live_keys());
            if (needed <= n) {
                CHECK(yes.has_value());
            }
            CHECK_FALSE(no.has_value());
        }
    }
}

TEST_CASE("rotation deletes the old key irreversibly") {
    DetRng rng(4);
    CommitteeFixture f(4, 25, rng);
    GsAgent& gs = *f.agents[0];
    const Bytes old_public = gs.keypair().public_key;
    Bytes old_sig = sign(gs.keypair(), from_string("before rotation"));

    gs.rotate_key(rng);
    CHECK(gs.keypair().public_key != old_public);

    // Signing with the new key works; the old handle is tombstoned.
    Bytes new_sig = sign(gs.keypair(), from_string("after rotation"));
    CHECK(verify(gs.keypair().public_key, from_string("after rotation"), new_sig));
    CHECK_THROWS_AS(sign(gs.retired_keypair(), from_string("forgery")), Error);

    // Signatures made before rotation remain verifiable under the old key.
    CHECK(verify(old_public, from_string("before rotation"), old_sig));
}

TEST_CASE("handover chain verification walks every link") {
    DetRng rng(5);
    CommitteeFixture epoch0(6, 33, rng, 0, 0); // t_GS = 1, needs 2

    // Build three epochs with real rotations.
    CommitteeChain chain;
    chain.epochs.push_back(epoch0.committee);

    CommitteeFixture epoch1(8, 33, rng, 1, 100);
    std::vector<GsId> signers0;
    for (const auto& [id, pk] : epoch0.committee.members) {
        (void)pk;
        signers0.push_back(id);
    }
    auto h01 = propose_and_sign_handover(epoch0.committee, epoch1.committee.members, signers0,
                                         epoch0.live_keys());
    REQUIRE(h01.has_value());
    chain.epochs.push_back(epoch1.committee);
    chain.handovers.push_back(*h01);

    CommitteeFixture epoch2(10, 33, rng, 2, 200);
    std::vector<GsId> signers1;
    for (const auto& [id, pk] : epoch1.committee.members) {
        (void)pk;
        signers1.push_back(id);
    }
    auto h12 = propose_and_sign_handover(epoch1.committee, epoch2.committee.members, signers1,
                                         epoch1.live_keys());
    REQUIRE(h12.has_value());
    chain.epochs.push_back(epoch2.committee);
    chain.handovers.push_back(*h12);

    CHECK(verify_handover_chain(chain, epoch0.committee));

    SUBCASE("a link with only t_GS signers fails") {
        CommitteeChain weak = chain;
        weak.handovers[0].signatures.resize(static_cast<std::size_t>(epoch0.committee.gs_fault_bound()));
        CHECK_FALSE(verify_handover_chain(weak, epoch0.committee));
    }

    SUBCASE("a tampered member list fails") {
        CommitteeChain bad = chain;
        bad.epochs[1].members[0].second = generate_keypair(epoch0.suite, 999).public_key;
        CHECK_FALSE(verify_handover_chain(bad, epoch0.committee));
    }

    SUBCASE("a signer outside the outgoing committee fails") {
        CommitteeChain bad = chain;
        bad.handovers[0].signatures[0].first = GsId{500};
        CHECK_FALSE(verify_handover_chain(bad, epoch0.committee));
    }

    SUBCASE("the genesis committee must match") {
        CommitteeFixture other(6, 33, rng, 0, 300);
        CHECK_FALSE(verify_handover_chain(chain, other.committee));
    }
}

TEST_CASE("posterior corruption cannot forge past-epoch signatures") {
    // Random rotation schedules: members rotate at handover, adversary
    // corrupts them afterwards, then tries to sign for the old epoch.
    DetRng rng(6);
    int forgeries = 0;
    for (int schedule = 0; schedule < 1000; ++schedule) {
        const int n = 4 + static_cast<int>(rng.uniform(0, 4));
        const int t = 10 + static_cast<int>(rng.uniform(0, 4)) * 10;
        CommitteeFixture f(n, t, rng);
        auto next = fresh_members(n, 50, rng);

        std::vector<GsId> signers;
        for (const auto& [id, pk] : f.committee.members) {
            (void)pk;
            signers.push_back(id);
        }
        auto handover = propose_and_sign_handover(f.committee, next, signers, f.live_keys());
        REQUIRE(handover.has_value());

        // Honest members rotate; corruption arrives after rotation for a
        // random subset within the bound.
        for (auto& a : f.agents) a->rotate_key(rng);
        const int corrupt_n = static_cast<int>(
            rng.uniform(1, static_cast<std::uint64_t>(std::max(1, f.committee.gs_fault_bound()))));

        HandoverCertificate fake;
        fake.new_committee = fresh_members(3, 900, rng);
        fake.old_epoch = 0;
        const Bytes body = fake.signing_body();
        for (int i = 0; i < corrupt_n; ++i) {
            GsAgent& victim = *f.agents[static_cast<std::size_t>(i)];
            // The stolen old handle is dead.
            try {
                Bytes sig = sign(victim.retired_keypair(), body);
                (void)sig;
                ++forgeries;
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::deleted_key);
            }
            // The live (new) key does not verify under the old registry.
            Bytes with_new = sign(victim.keypair(), body);
            fake.signatures.emplace_back(victim.id(), with_new);
        }
        CommitteeChain bogus;
        bogus.epochs = {f.committee, Committee{1, fake.new_committee, t}};
        bogus.handovers = {fake};
        if (verify_handover_chain(bogus, f.committee)) ++forgeries;
    }
    CHECK(forgeries == 0);
}

TEST_CASE("satellite applies a valid handover and rejects a wrong-epoch one") {
    DetRng rng(7);
    CommitteeFixture f(6, 33, rng);
    SatelliteAgent::Options opts;
    opts.suite = f.suite;
    opts.params = {f.committee.gs_fault_bound(), 1, 6000};
    SatelliteAgent sat(opts, f.committee.registry());
    sat.on_boot(rng);
    const Hash32 before = sat.measurement();

    auto next = fresh_members(8, 400, rng);
    std::vector<GsId> signers;
    for (const auto& [id, pk] : f.committee.members) {
        (void)pk;
        signers.push_back(id);
    }
    auto handover = propose_and_sign_handover(f.committee, next, signers, f.live_keys());
    REQUIRE(handover.has_value());

    SUBCASE("valid handover swaps the trust store and the measurement") {
        sat.update_committee(*handover);
        CHECK(sat.trust_store().epoch() == 1);
        CHECK(sat.trust_store().has(GsId{400}));
        CHECK_FALSE(sat.trust_store().has(GsId{0}));
        CHECK(sat.measurement() != before);
    }

    SUBCASE("wrong-epoch handover is invalid") {
        HandoverCertificate wrong = *handover;
        wrong.old_epoch = 3;
        CHECK_THROWS_AS(sat.update_committee(wrong), Error);
        try {
            sat.update_committee(wrong);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::invalid_handover);
        }
        // Blocked delivery leaves the old view in place.
        CHECK(sat.trust_store().epoch() == 0);
        CHECK(sat.measurement() == before);
    }
}
