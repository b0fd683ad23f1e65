#pragma once

#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <set>

#include "seap/committee.hpp"
#include "seap/ground_station.hpp"
#include "seap/perf_models.hpp"
#include "seap/satellite.hpp"
#include "seap/trace.hpp"

namespace seap::sim {

enum class AdversaryStrategy {
    passive,
    channel_hop,
    mitm_clone,
    relay,
    block_all,
    randomized_harvest, // property-suite adversary; not exposed on the CLI
};

const char* strategy_name(AdversaryStrategy s);

enum class ScheduleKind { leo, geo, explicit_passes };

struct Pass {
    GsId gs;
    std::int64_t start_ms = 0;
    std::int64_t duration_ms = 0;
};

// Deterministic event clock: ties broken by insertion order.
class SimClock {
public:
    void at(std::int64_t t_ms, std::function<void()> fn) {
        queue_.push(Item{t_ms, next_seq_++, std::move(fn)});
    }
    bool empty() const { return queue_.empty(); }
    std::int64_t next_time() const { return queue_.top().t_ms; }
    std::int64_t now() const { return now_; }

    void step() {
        Item item = queue_.top();
        queue_.pop();
        now_ = item.t_ms;
        item.fn();
    }

private:
    struct Item {
        std::int64_t t_ms;
        std::uint64_t seq;
        std::function<void()> fn;

        bool operator>(const Item& o) const {
            return t_ms != o.t_ms ? t_ms > o.t_ms : seq > o.seq;
        }
    };
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue_;
    std::uint64_t next_seq_ = 0;
    std::int64_t now_ = 0;
};

// Per-station corruption windows. Enforces the minimum-window and
// concurrency bounds at grant time.
class ChannelTable {
public:
    ChannelTable(std::int64_t window_ms, int channel_bound)
        : window_ms_(window_ms), channel_bound_(channel_bound) {}

    // Throws window_too_short / concurrency_bound_exceeded.
    void corrupt(GsId gs, std::int64_t start_ms, std::int64_t end_ms);
    bool corrupted_at(GsId gs, std::int64_t t_ms) const;
    int concurrent_at(std::int64_t t_ms) const;
    const std::map<GsId, std::vector<std::pair<std::int64_t, std::int64_t>>>& intervals() const {
        return intervals_;
    }

private:
    std::int64_t window_ms_;
    int channel_bound_;
    std::map<GsId, std::vector<std::pair<std::int64_t, std::int64_t>>> intervals_;
};

struct AdversaryConfig {
    AdversaryStrategy strategy = AdversaryStrategy::passive;
    // Explicit channel-corruption schedule (gs, start, end).
    std::vector<std::tuple<GsId, std::int64_t, std::int64_t>> channel_schedule;
    // Station corruption times; irreversible once reached.
    std::map<GsId, std::int64_t> gs_corruption_times;
    // Assumption-violating switch for the all-channels scenario.
    bool override_channel_bound = false;
    // Earth TEE clone threshold override (naive-threshold demonstration).
    std::optional<int> earth_threshold_override;
};

struct ScenarioSpec {
    std::string name = "scenario";
    CryptoSuite suite = CryptoSuite::get(SuiteId::ecc_p256_class);
    int n_gs = 10;
    int t_percent = 20;
    int channel_fault_bound = 2;
    std::int64_t window_ms = 43'200'000; // 12 h
    std::int64_t deadline_ms = 0;
    std::uint64_t seed = 1;
    bool parallel_se = false;
    ScheduleKind schedule = ScheduleKind::leo;
    std::int64_t orbit_period_ms = 5'700'000; // 95 min
    IntRange contacts_per_orbit{1, 2};
    std::vector<Pass> explicit_passes;
    std::int64_t retry_interval_ms = 0; // 0: defaults to window
    std::int64_t clock_skew_ms = 0;
    std::size_t nonce_bytes = kDefaultNonceBytes; // lambda / 8
    bool identity_checks = true;
    bool degraded_mode_allowed = false;
    bool satellite_closed_anchor_failed = false;
    bool satellite_open_anchor_failed = false;
    AdversaryConfig adversary;

    int gs_fault_bound() const {
        return static_cast<int>((static_cast<long long>(t_percent) * n_gs) / 100);
    }
    int required_endorsements() const {
        return perf::compute_threshold(gs_fault_bound(), channel_fault_bound);
    }
    void validate() const; // throws config_invalid
};

enum class Outcome { certified, timeout, attack_succeeded, attack_failed };

const char* outcome_name(Outcome o);

struct ExchangeStat {
    GsId gs;
    std::int64_t hello_sent_ms = 0;
    std::int64_t completed_ms = 0; // key-verify delivery
    std::uint64_t hello_bytes = 0;
    std::uint64_t hello_ack_bytes = 0;
    std::uint64_t key_verify_bytes = 0;
    bool with_earth_tee = false;

    std::int64_t duration_ms() const { return completed_ms - hello_sent_ms; }
    std::uint64_t total_bytes() const { return hello_bytes + hello_ack_bytes + key_verify_bytes; }
};

// Provenance of one endorsement as the adversary-aware trace sees it.
struct EndorsementEvent {
    std::int64_t ts_ms = 0;
    GsId gs;
    bool to_earth_tee = false;
    bool sender_corrupted = false;
    bool over_corrupted_channel = false;
};

struct Metrics {
    std::optional<std::int64_t> time_to_cert_ms;
    int orbits_to_completion = 0;
    std::vector<EndorsementEvent> endorsements; // satellite and earth, in order
    std::vector<ExchangeStat> exchanges;        // completed exchanges
    std::map<std::string, int> drop_reasons;
    bool satellite_certified = false;
    bool earth_certified = false;
    std::optional<std::int64_t> earth_cert_time_ms;
    int earth_distinct_endorsers = 0;
    // Max distinct stations endorsing the earth TEE over corrupted channels
    // inside any single window.
    int max_corrupted_window_yield = 0;
    std::string eat_result; // accept / accept-degraded / reject reason
};

struct RunResult {
    Outcome outcome = Outcome::timeout;
    Metrics metrics;
    EventTrace trace;
    // Retained for post-run verification in tests.
    std::optional<CertificateOfAuthorization> satellite_cert;
    std::optional<CertificateOfAuthorization> earth_cert;
    KeyRegistry committee;
};

// Runs a network scenario to completion (certificate, deadline, or drained
// queue). Deterministic: identical spec and seed give identical traces.
RunResult run_scenario(const ScenarioSpec& spec);

// Committee-rotation plan for the scripted lifecycle scenario.
struct EpochPlan {
    int genesis_members = 10;
    int next_members = 30;
    int t_percent = 40;
};

// Scripted committee-lifecycle scenario: genesis committee endorses, rotates
// to a larger committee, the old members are then corrupted, and every
// old-epoch forgery attempt must fail.
RunResult run_posterior_corruption_scenario(std::uint64_t seed, const EpochPlan& plan = {});

// Scripted root-of-trust scenario: a ground clone performs its own genesis;
// its keys differ and the verifier rejects its evidence.
RunResult run_genesis_clone_scenario(std::uint64_t seed);

// Generates a randomized adversary spec respecting the corruption bounds;
// used by the correctness property suite.
ScenarioSpec make_randomized_adversary_spec(std::uint64_t seed);

// Standard pass schedule templates.
std::vector<Pass> make_leo_passes(int n_gs, std::int64_t orbit_period_ms, IntRange contacts_per_orbit,
                                  std::int64_t deadline_ms, DetRng& rng);
std::vector<Pass> make_geo_passes(int n_gs, std::int64_t deadline_ms);

} // namespace seap::sim
