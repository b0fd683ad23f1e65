#include "seap/simnet.hpp"

#include <algorithm>

#include "seap/codec.hpp"

namespace seap::sim {

const char* strategy_name(AdversaryStrategy s) {
    switch (s) {
        case AdversaryStrategy::passive: return "passive";
        case AdversaryStrategy::channel_hop: return "channel-hop";
        case AdversaryStrategy::mitm_clone: return "mitm-clone";
        case AdversaryStrategy::relay: return "relay";
        case AdversaryStrategy::block_all: return "block-all";
        case AdversaryStrategy::randomized_harvest: return "randomized-harvest";
    }
    return "unknown";
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::certified: return "certified";
        case Outcome::timeout: return "timeout";
        case Outcome::attack_succeeded: return "attack-succeeded";
        case Outcome::attack_failed: return "attack-failed";
    }
    return "unknown";
}

void ScenarioSpec::validate() const {
    if (n_gs <= 0) throw Error(ErrorCode::config_invalid, "n_gs must be positive");
    if (t_percent < 0 || t_percent > 100) throw Error(ErrorCode::config_invalid, "t_percent out of range");
    if (channel_fault_bound < 0) throw Error(ErrorCode::config_invalid, "t_ch must be non-negative");
    if (window_ms <= 0) throw Error(ErrorCode::config_invalid, "w_ms must be positive");
    if (deadline_ms <= 0) throw Error(ErrorCode::config_invalid, "deadline_ms must be positive");
    if (orbit_period_ms <= 0) throw Error(ErrorCode::config_invalid, "orbit_period_ms must be positive");
    if (nonce_bytes < 8 || nonce_bytes > 64) {
        throw Error(ErrorCode::config_invalid, "nonce_bytes outside [8, 64]");
    }
    if (schedule == ScheduleKind::leo &&
        (contacts_per_orbit.lo <= 0 || contacts_per_orbit.hi < contacts_per_orbit.lo)) {
        throw Error(ErrorCode::config_invalid, "contacts_per_orbit range invalid");
    }
    if (schedule == ScheduleKind::leo && contacts_per_orbit.hi > 3) {
        throw Error(ErrorCode::config_invalid,
                    "leo template supports at most 3 contacts per orbit; use explicit passes");
    }
    if (schedule == ScheduleKind::explicit_passes && explicit_passes.empty()) {
        throw Error(ErrorCode::config_invalid, "explicit schedule without passes");
    }
    if (adversary.strategy == AdversaryStrategy::mitm_clone && !adversary.override_channel_bound) {
        throw Error(ErrorCode::assumption_violated,
                    "corrupting all channels requires the override flag");
    }
    if (static_cast<int>(adversary.gs_corruption_times.size()) > gs_fault_bound()) {
        throw Error(ErrorCode::config_invalid,
                    "station corruptions exceed floor(t/100 * n)");
    }
}

void ChannelTable::corrupt(GsId gs, std::int64_t start_ms, std::int64_t end_ms) {
    if (end_ms - start_ms < window_ms_) {
        throw Error(ErrorCode::window_too_short, "corruption interval shorter than the window");
    }
    // Concurrency check at every boundary the new interval overlaps.
    for (std::int64_t probe : {start_ms, end_ms - 1}) {
        int concurrent = 1;
        for (const auto& [id, ivs] : intervals_) {
            (void)id;
            for (const auto& [s, e] : ivs) {
                if (s <= probe && probe < e) ++concurrent;
            }
        }
        if (concurrent > channel_bound_) {
            throw Error(ErrorCode::concurrency_bound_exceeded, "channel fault budget exhausted");
        }
    }
    for (const auto& [id, ivs] : intervals_) {
        (void)id;
        for (const auto& [s, e] : ivs) {
            (void)e;
            if (start_ms < s && s < end_ms) {
                int concurrent = 1; // the interval being granted
                for (const auto& [id2, ivs2] : intervals_) {
                    (void)id2;
                    for (const auto& [s2, e2] : ivs2) {
                        if (s2 <= s && s < e2) ++concurrent;
                    }
                }
                if (concurrent > channel_bound_) {
                    throw Error(ErrorCode::concurrency_bound_exceeded, "channel fault budget exhausted");
                }
            }
        }
    }
    intervals_[gs].emplace_back(start_ms, end_ms);
}

bool ChannelTable::corrupted_at(GsId gs, std::int64_t t_ms) const {
    auto it = intervals_.find(gs);
    if (it == intervals_.end()) return false;
    for (const auto& [s, e] : it->second) {
        if (s <= t_ms && t_ms < e) return true;
    }
    return false;
}

int ChannelTable::concurrent_at(std::int64_t t_ms) const {
    int n = 0;
    for (const auto& [id, ivs] : intervals_) {
        (void)id;
        for (const auto& [s, e] : ivs) {
            if (s <= t_ms && t_ms < e) ++n;
        }
    }
    return n;
}

std::vector<Pass> make_leo_passes(int n_gs, std::int64_t orbit_period_ms, IntRange contacts_per_orbit,
                                  std::int64_t deadline_ms, DetRng& rng) {
    // Contact windows sit in the last fifth of each orbit, matching the
    // published relationship between orbit counts and wall-clock hours.
    const std::int64_t slot_offsets[3] = {orbit_period_ms * 80 / 100, orbit_period_ms * 87 / 100,
                                          orbit_period_ms * 90 / 100};
    const std::int64_t duration = orbit_period_ms / 14;
    std::vector<Pass> passes;
    std::vector<std::uint32_t> order;
    std::size_t cursor = 0;
    auto next_station = [&]() {
        if (cursor == order.size()) {
            std::vector<std::uint32_t> fresh(static_cast<std::size_t>(n_gs));
            for (int i = 0; i < n_gs; ++i) fresh[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i);
            for (std::size_t i = fresh.size(); i > 1; --i) {
                std::size_t j = static_cast<std::size_t>(rng.uniform(0, i - 1));
                std::swap(fresh[i - 1], fresh[j]);
            }
            order = std::move(fresh);
            cursor = 0;
        }
        return GsId{order[cursor++]};
    };
    for (std::int64_t orbit_start = 0; orbit_start < deadline_ms; orbit_start += orbit_period_ms) {
        const int contacts = static_cast<int>(
            rng.uniform(static_cast<std::uint64_t>(contacts_per_orbit.lo),
                        static_cast<std::uint64_t>(contacts_per_orbit.hi)));
        for (int c = 0; c < contacts && c < 3; ++c) {
            const std::int64_t jitter = static_cast<std::int64_t>(rng.uniform(0, 5000));
            Pass p;
            p.gs = next_station();
            p.start_ms = orbit_start + slot_offsets[c] + jitter;
            p.duration_ms = duration;
            if (p.start_ms < deadline_ms) passes.push_back(p);
        }
    }
    std::sort(passes.begin(), passes.end(),
              [](const Pass& a, const Pass& b) { return a.start_ms < b.start_ms; });
    return passes;
}

std::vector<Pass> make_geo_passes(int n_gs, std::int64_t deadline_ms) {
    std::vector<Pass> passes;
    for (int i = 0; i < n_gs; ++i) {
        // Permanent visibility; initiations staggered slightly for realism.
        passes.push_back({GsId{static_cast<std::uint32_t>(i)}, i * 100, deadline_ms});
    }
    return passes;
}

namespace {

constexpr std::int64_t kOneWayLo = 20;
constexpr std::int64_t kOneWayHi = 40;
constexpr std::int64_t kGsVerifyLo = 50;
constexpr std::int64_t kGsVerifyHi = 100;

struct OpenExchange {
    GsId gs;
    std::int64_t hello_sent_ms = 0;
    std::uint64_t hello_bytes = 0;
    std::uint64_t ack_bytes = 0;
    bool with_earth = false;
};

class Engine {
public:
    explicit Engine(ScenarioSpec spec)
        : spec_(std::move(spec)),
          rng_(spec_.seed),
          rng_keys_(rng_.fork()),
          rng_sched_(rng_.fork()),
          rng_sim_(rng_.fork()),
          channels_(spec_.window_ms, effective_channel_bound()) {}

    RunResult run();

private:
    int effective_channel_bound() const {
        return spec_.adversary.override_channel_bound ? spec_.n_gs : spec_.channel_fault_bound;
    }

    std::string gs_name(GsId id) const { return id.str(); }

    bool gs_corrupted_at(GsId id, std::int64_t t) const {
        auto it = spec_.adversary.gs_corruption_times.find(id);
        return it != spec_.adversary.gs_corruption_times.end() && t >= it->second;
    }

    bool in_pass(GsId id, std::int64_t t) const {
        for (const auto& p : passes_) {
            if (p.gs == id && p.start_ms <= t && t < p.start_ms + p.duration_ms) return true;
        }
        return false;
    }

    std::int64_t draw_onboard_crypto(bool earth) {
        if (earth) return 0; // adversary hardware is unconstrained
        std::int64_t d[4];
        for (auto& v : d) {
            v = rng_sim_.uniform_i64(spec_.suite.sign_latency_ms.lo, spec_.suite.sign_latency_ms.hi);
        }
        if (spec_.suite.id == SuiteId::ecc_p256_class && spec_.parallel_se) {
            return std::max(d[0] + d[1], d[2] + d[3]); // independent buses
        }
        return d[0] + d[1] + d[2] + d[3];
    }

    std::int64_t draw_gs_verify() { return rng_sim_.uniform_i64(kGsVerifyLo, kGsVerifyHi); }

    void setup();
    void schedule_pass(const Pass& pass);
    void gs_initiate(GsId id, std::int64_t t);
    void deliver_hello_to(SatelliteAgent& target, bool earth, const HelloMsg& msg, std::int64_t t,
                          GsId gs);
    void deliver_ack_to_gs(GsId id, const HelloAckMsg& ack, std::int64_t t, bool from_earth,
                           std::optional<std::int64_t> forced_verify_ms = std::nullopt);
    void deliver_kv(GsId id, const KeyVerifyMsg& kv, const Nonce& session, std::int64_t t);
    void complete_exchange(const Nonce& session, std::int64_t done_ms, std::uint64_t kv_bytes,
                           bool with_earth);
    void on_satellite_certified(std::int64_t t);
    void on_earth_certified(std::int64_t t);
    void run_eat_flow(GsId verifier, std::int64_t t);
    void deliver_cert_to_gs(GsId id, std::int64_t t);
    void count_drop(const std::string& reason, std::int64_t t, const std::string& actor,
                    const std::string& detail);
    void mint_endorsements_for_earth(GsId id, std::int64_t t);
    Outcome decide_outcome() const;
    void finalize_metrics();

    ScenarioSpec spec_;
    DetRng rng_;
    DetRng rng_keys_;
    DetRng rng_sched_;
    DetRng rng_sim_;
    SimClock clock_;
    ChannelTable channels_;
    EventTrace trace_;
    Metrics metrics_;

    KeyRegistry registry_;
    std::unique_ptr<SatelliteAgent> satellite_;
    std::unique_ptr<SatelliteAgent> earth_;
    std::vector<std::unique_ptr<GsAgent>> stations_;
    std::vector<Pass> passes_;
    std::map<GsId, std::int64_t> pass_prop_; // current one-way delay per station
    std::map<Nonce, OpenExchange> open_;
    std::set<GsId> cert_delivered_;
    std::set<GsId> hop_harvested_; // channel-hop: stations already given the scripted ack
    bool eat_done_ = false;
    std::int64_t retry_interval_ = 0;
};

void Engine::setup() {
    spec_.validate();
    retry_interval_ = spec_.retry_interval_ms > 0 ? spec_.retry_interval_ms : spec_.window_ms;

    // Station keys first, in id order, then the satellite anchors, then the
    // earth clone: a fixed draw order keeps runs replayable.
    std::vector<KeyPair> gs_keys;
    registry_ = KeyRegistry(0);
    for (int i = 0; i < spec_.n_gs; ++i) {
        gs_keys.push_back(generate_keypair(spec_.suite, rng_keys_.next_u64()));
        registry_.put(GsId{static_cast<std::uint32_t>(i)}, gs_keys.back().public_key);
    }

    SatelliteAgent::Options sat_opts;
    sat_opts.suite = spec_.suite;
    sat_opts.params = {spec_.gs_fault_bound(), spec_.channel_fault_bound, spec_.window_ms};
    sat_opts.closed_failed_at_boot = spec_.satellite_closed_anchor_failed;
    sat_opts.open_failed_at_boot = spec_.satellite_open_anchor_failed;
    satellite_ = std::make_unique<SatelliteAgent>(sat_opts, registry_);
    satellite_->on_boot(rng_keys_);
    trace_.add(0, "boot", "sat").detail = "genesis complete";

    const bool wants_earth = spec_.adversary.strategy == AdversaryStrategy::channel_hop ||
                             spec_.adversary.strategy == AdversaryStrategy::mitm_clone ||
                             spec_.adversary.strategy == AdversaryStrategy::relay ||
                             spec_.adversary.strategy == AdversaryStrategy::randomized_harvest;
    if (wants_earth) {
        SatelliteAgent::Options earth_opts;
        earth_opts.suite = spec_.suite;
        earth_opts.params = sat_opts.params;
        earth_opts.closed_serial = "00000000000000e1"; // the clone's own silicon
        earth_opts.open_serial = "00000000000000e2";
        earth_opts.threshold_override = spec_.adversary.earth_threshold_override;
        earth_ = std::make_unique<SatelliteAgent>(earth_opts, registry_);
        earth_->on_boot(rng_keys_);
        trace_.add(0, "boot", "earth-tee").detail = "clone genesis";
    }

    VerifierPolicy policy;
    policy.reference_measurement = satellite_->measurement();
    policy.registered_serials = {satellite_->closed_element().serial(),
                                 satellite_->open_element().serial()};
    policy.nonce_ttl_ms = spec_.window_ms;
    policy.degraded_mode_allowed = spec_.degraded_mode_allowed;
    policy.identity_checks_enabled = spec_.identity_checks;
    for (int i = 0; i < spec_.n_gs; ++i) {
        stations_.push_back(std::make_unique<GsAgent>(GsId{static_cast<std::uint32_t>(i)},
                                                      gs_keys[static_cast<std::size_t>(i)], registry_,
                                                      spec_.window_ms, policy));
    }

    switch (spec_.schedule) {
        case ScheduleKind::leo:
            passes_ = make_leo_passes(spec_.n_gs, spec_.orbit_period_ms, spec_.contacts_per_orbit,
                                      spec_.deadline_ms, rng_sched_);
            break;
        case ScheduleKind::geo:
            passes_ = make_geo_passes(spec_.n_gs, spec_.deadline_ms);
            break;
        case ScheduleKind::explicit_passes:
            passes_ = spec_.explicit_passes;
            break;
    }

    // Channel corruption schedule: explicit, or derived for the scripted
    // strategies.
    auto schedule = spec_.adversary.channel_schedule;
    if (schedule.empty()) {
        const std::int64_t w = spec_.window_ms;
        switch (spec_.adversary.strategy) {
            case AdversaryStrategy::channel_hop:
                // Hop two channels across consecutive windows, budget
                // permitting.
                if (spec_.channel_fault_bound >= 1) {
                    schedule.emplace_back(GsId{0}, 0, w);
                    schedule.emplace_back(GsId{1}, w, 2 * w);
                }
                break;
            case AdversaryStrategy::mitm_clone:
                for (int i = 0; i < spec_.n_gs; ++i) {
                    schedule.emplace_back(GsId{static_cast<std::uint32_t>(i)}, 0,
                                          spec_.deadline_ms + w);
                }
                break;
            default:
                break;
        }
    }
    for (const auto& [gs, start, end] : schedule) {
        channels_.corrupt(gs, start, end); // validates budget and window
        clock_.at(start, [this, gs2 = gs] {
            auto& rec = trace_.add(clock_.now(), "corrupt-start", "adversary");
            rec.gs = gs2.value;
        });
        if (end <= spec_.deadline_ms) {
            clock_.at(end, [this, gs2 = gs] {
                auto& rec = trace_.add(clock_.now(), "corrupt-end", "adversary");
                rec.gs = gs2.value;
            });
        }
    }

    for (const auto& [gs, t] : spec_.adversary.gs_corruption_times) {
        clock_.at(t, [this, gs2 = gs] {
            auto& rec = trace_.add(clock_.now(), "corrupt-gs", "adversary");
            rec.gs = gs2.value;
            if (earth_) mint_endorsements_for_earth(gs2, clock_.now());
        });
    }

    for (const auto& pass : passes_) schedule_pass(pass);
}

void Engine::schedule_pass(const Pass& pass) {
    clock_.at(pass.start_ms, [this, pass] {
        auto& rec = trace_.add(clock_.now(), "pass-start", "schedule");
        rec.gs = pass.gs.value;
        pass_prop_[pass.gs] = rng_sim_.uniform_i64(kOneWayLo, kOneWayHi);
        if (satellite_->phase() == SatellitePhase::certified && !cert_delivered_.count(pass.gs)) {
            deliver_cert_to_gs(pass.gs, clock_.now());
        }
        gs_initiate(pass.gs, clock_.now());
        // Re-initiations while the pass lasts and the station lacks the cert.
        for (std::int64_t t = pass.start_ms + retry_interval_;
             t < pass.start_ms + pass.duration_ms && t < spec_.deadline_ms; t += retry_interval_) {
            clock_.at(t, [this, gs = pass.gs] {
                if (!stations_[gs.value]->received_cert()) gs_initiate(gs, clock_.now());
            });
        }
    });
}

void Engine::gs_initiate(GsId id, std::int64_t t) {
    GsAgent& gs = *stations_[id.value];
    if (gs.received_cert()) return;
    HelloMsg hello = gs.initiate_hello(t + spec_.clock_skew_ms, rng_sim_, spec_.nonce_bytes);
    const std::uint64_t bytes = encode(hello, spec_.suite).size();
    const bool corrupted = channels_.corrupted_at(id, t);
    auto& rec = trace_.add(t, "send", gs_name(id));
    rec.peer = "sat";
    rec.gs = id.value;
    rec.bytes = bytes;
    rec.channel_corrupted = corrupted;
    rec.detail = "hello";
    open_[hello.nonce] = OpenExchange{id, t, bytes, 0, false};

    const auto strategy = spec_.adversary.strategy;
    if (strategy == AdversaryStrategy::block_all) {
        clock_.at(t + pass_prop_[id], [this, id] { count_drop("host-blocked", clock_.now(), "adversary", "hello"); });
        return;
    }
    if (strategy == AdversaryStrategy::relay) {
        // Host-side diversion: up to the satellite host, down to the clone.
        const std::int64_t p = pass_prop_[id];
        clock_.at(t + 2 * p, [this, hello, id] {
            open_[hello.nonce].with_earth = true;
            deliver_hello_to(*earth_, true, hello, clock_.now(), id);
        });
        return;
    }
    if (corrupted && earth_) {
        open_[hello.nonce].with_earth = true;
        if (strategy == AdversaryStrategy::channel_hop) {
            deliver_hello_to(*earth_, true, hello, t, id); // earth-side MitM, no delay
            return;
        }
        if (strategy == AdversaryStrategy::mitm_clone) {
            deliver_hello_to(*earth_, true, hello, t, id);
            return;
        }
        if (strategy == AdversaryStrategy::randomized_harvest) {
            const std::uint64_t roll = rng_sim_.uniform(0, 99);
            if (roll < 20) { // occasional blackhole
                count_drop("adversary-dropped", t, "adversary", "hello");
                return;
            }
            if (roll < 40) { // pass through to the satellite unchanged
                open_[hello.nonce].with_earth = false;
                clock_.at(t + pass_prop_[id],
                          [this, hello, id] { deliver_hello_to(*satellite_, false, hello, clock_.now(), id); });
                return;
            }
            deliver_hello_to(*earth_, true, hello, t, id);
            return;
        }
    }
    clock_.at(t + pass_prop_[id],
              [this, hello, id] { deliver_hello_to(*satellite_, false, hello, clock_.now(), id); });
}

void Engine::deliver_hello_to(SatelliteAgent& target, bool earth, const HelloMsg& msg, std::int64_t t,
                              GsId gs) {
    auto& rec = trace_.add(t, "deliver", earth ? "earth-tee" : "sat");
    rec.gs = gs.value;
    rec.detail = "hello";
    auto ack = target.handle_hello(msg, t);
    if (!ack) {
        count_drop(target.last_drop_reason().value_or("dropped"), t, earth ? "earth-tee" : "sat", "hello");
        return;
    }
    const std::int64_t crypto = draw_onboard_crypto(earth);
    const std::int64_t send_t = t + crypto;
    auto it = open_.find(msg.nonce);
    if (it != open_.end()) it->second.ack_bytes = encode(*ack, spec_.suite).size();

    if (!earth) {
        clock_.at(send_t, [this, ack = *ack, gs] {
            const std::int64_t p = pass_prop_[gs];
            auto& out = trace_.add(clock_.now(), "send", "sat");
            out.peer = gs_name(gs);
            out.gs = gs.value;
            out.bytes = encode(ack, spec_.suite).size();
            out.detail = "hello-ack";
            const bool corrupted = channels_.corrupted_at(gs, clock_.now());
            out.channel_corrupted = corrupted;
            if (corrupted && spec_.adversary.strategy == AdversaryStrategy::randomized_harvest &&
                rng_sim_.chance(50)) {
                count_drop("adversary-dropped", clock_.now(), "adversary", "hello-ack");
                return;
            }
            clock_.at(clock_.now() + p,
                      [this, ack, gs] { deliver_ack_to_gs(gs, ack, clock_.now(), false); });
        });
        return;
    }

    // Earth clone replies; delivery timing is adversary-controlled.
    const auto strategy = spec_.adversary.strategy;
    if (strategy == AdversaryStrategy::channel_hop) {
        // Scripted endorsement instants: half the window into the first
        // corruption, one second into the second. The adversary positions
        // the delivery so the station signs exactly on schedule.
        const std::int64_t w = spec_.window_ms;
        const std::int64_t target_ts = gs.value == 0 ? w / 2 : w + 1000;
        const std::int64_t verify = draw_gs_verify();
        std::int64_t deliver_at = target_ts - verify;
        if (hop_harvested_.count(gs) || deliver_at < t) deliver_at = t + 200;
        hop_harvested_.insert(gs);
        clock_.at(deliver_at, [this, ack = *ack, gs, verify] {
            deliver_ack_to_gs(gs, ack, clock_.now(), true, verify);
        });
        return;
    }
    if (strategy == AdversaryStrategy::relay) {
        const std::int64_t p = pass_prop_[gs];
        clock_.at(send_t + 2 * p, [this, ack = *ack, gs] { deliver_ack_to_gs(gs, ack, clock_.now(), true); });
        return;
    }
    if (strategy == AdversaryStrategy::randomized_harvest) {
        const std::int64_t margin = std::max<std::int64_t>(spec_.window_ms - 150, 1);
        const std::int64_t delay = rng_sim_.uniform_i64(0, std::max<std::int64_t>(margin / 2, 1));
        clock_.at(t + delay, [this, ack = *ack, gs] { deliver_ack_to_gs(gs, ack, clock_.now(), true); });
        return;
    }
    clock_.at(send_t, [this, ack = *ack, gs] { deliver_ack_to_gs(gs, ack, clock_.now(), true); });
}

void Engine::deliver_ack_to_gs(GsId id, const HelloAckMsg& ack, std::int64_t t, bool from_earth,
                               std::optional<std::int64_t> forced_verify_ms) {
    auto& rec = trace_.add(t, "deliver", gs_name(id));
    rec.gs = id.value;
    rec.detail = "hello-ack";
    rec.channel_corrupted = channels_.corrupted_at(id, t);
    const std::int64_t verify = forced_verify_ms ? *forced_verify_ms : draw_gs_verify();
    clock_.at(t + verify, [this, ack, id, from_earth] {
        GsAgent& gs = *stations_[id.value];
        const std::int64_t now = clock_.now() + spec_.clock_skew_ms;
        auto kv = gs.handle_hello_ack(ack, now);
        if (!kv) {
            count_drop(gs.last_drop_reason().value_or("dropped"), clock_.now(), gs_name(id), "hello-ack");
            return;
        }
        auto it = open_.find(ack.nonce);
        if (it != open_.end()) it->second.with_earth = from_earth;
        auto& out = trace_.add(clock_.now(), "send", gs_name(id));
        out.peer = "sat";
        out.gs = id.value;
        out.bytes = encode(*kv, spec_.suite).size();
        out.detail = "key-verify";
        out.channel_corrupted = channels_.corrupted_at(id, clock_.now());
        deliver_kv(id, *kv, ack.nonce, clock_.now());
    });
}

void Engine::complete_exchange(const Nonce& session, std::int64_t done_ms, std::uint64_t kv_bytes,
                               bool with_earth) {
    auto it = open_.find(session);
    if (it == open_.end()) return;
    ExchangeStat stat;
    stat.gs = it->second.gs;
    stat.hello_sent_ms = it->second.hello_sent_ms;
    stat.completed_ms = done_ms;
    stat.hello_bytes = it->second.hello_bytes;
    stat.hello_ack_bytes = it->second.ack_bytes;
    stat.key_verify_bytes = kv_bytes;
    stat.with_earth_tee = with_earth;
    metrics_.exchanges.push_back(stat);
    open_.erase(it);
}

void Engine::deliver_kv(GsId id, const KeyVerifyMsg& kv, const Nonce& session, std::int64_t t) {
    const auto strategy = spec_.adversary.strategy;
    const bool corrupted = channels_.corrupted_at(id, t);
    const std::uint64_t kv_bytes = encode(kv, spec_.suite).size();

    auto accept_at = [this, kv_bytes, session](SatelliteAgent& target, bool earth, GsId gs,
                                               const KeyVerifyMsg& msg, std::int64_t at) {
        auto& rec = trace_.add(at, "deliver", earth ? "earth-tee" : "sat");
        rec.gs = gs.value;
        rec.detail = "key-verify";
        auto cert = target.handle_key_verify(msg, gs);
        if (target.last_drop_reason()) {
            count_drop(*target.last_drop_reason(), at, earth ? "earth-tee" : "sat", "key-verify");
            return;
        }
        EndorsementEvent ev;
        ev.ts_ms = msg.timestamp_ms;
        ev.gs = gs;
        ev.to_earth_tee = earth;
        ev.sender_corrupted = gs_corrupted_at(gs, at);
        ev.over_corrupted_channel = earth || channels_.corrupted_at(gs, at);
        metrics_.endorsements.push_back(ev);
        auto& erec = trace_.add(at, "endorse", earth ? "earth-tee" : "sat");
        erec.gs = gs.value;
        erec.channel_corrupted = ev.over_corrupted_channel;
        erec.detail = "ts=" + std::to_string(msg.timestamp_ms);
        complete_exchange(session, at, kv_bytes, earth);
        if (cert) {
            if (earth) {
                on_earth_certified(at);
            } else {
                on_satellite_certified(at);
            }
        }
    };

    if (strategy == AdversaryStrategy::block_all) {
        clock_.at(t + pass_prop_[id], [this] { count_drop("host-blocked", clock_.now(), "adversary", "key-verify"); });
        return;
    }
    if (strategy == AdversaryStrategy::relay) {
        const std::int64_t p = pass_prop_[id];
        clock_.at(t + 2 * p, [this, accept_at, kv, id] { accept_at(*earth_, true, id, kv, clock_.now()); });
        return;
    }
    if (corrupted && earth_) {
        if (strategy == AdversaryStrategy::randomized_harvest && rng_sim_.chance(15)) {
            count_drop("adversary-dropped", t, "adversary", "key-verify");
            return;
        }
        clock_.at(t, [this, accept_at, kv, id] { accept_at(*earth_, true, id, kv, clock_.now()); });
        return;
    }
    clock_.at(t + pass_prop_[id],
              [this, accept_at, kv, id] { accept_at(*satellite_, false, id, kv, clock_.now()); });
}

void Engine::mint_endorsements_for_earth(GsId id, std::int64_t t) {
    // A corrupted station's key signs whatever the adversary likes; aim the
    // timestamps at one focus window to maximize the quorum chance.
    GsAgent& gs = *stations_[id.value];
    const std::int64_t focus = spec_.deadline_ms / 2;
    for (int i = 0; i < 2; ++i) {
        std::int64_t ts =
            focus + rng_sim_.uniform_i64(-spec_.window_ms / 4, spec_.window_ms / 4);
        KeyVerifyMsg msg;
        msg.timestamp_ms = ts;
        msg.gs_id = id;
        msg.signature = sign(gs.keypair(), KeyVerifyMsg::signing_body(earth_->identity_vk(), ts));
        auto& rec = trace_.add(t, "endorse-minted", "adversary");
        rec.gs = id.value;
        rec.detail = "ts=" + std::to_string(ts);
        auto cert = earth_->handle_key_verify(msg, id);
        if (!earth_->last_drop_reason()) {
            EndorsementEvent ev;
            ev.ts_ms = ts;
            ev.gs = id;
            ev.to_earth_tee = true;
            ev.sender_corrupted = true;
            ev.over_corrupted_channel = false;
            metrics_.endorsements.push_back(ev);
        }
        if (cert) on_earth_certified(t);
    }
}

void Engine::on_satellite_certified(std::int64_t t) {
    if (metrics_.satellite_certified) return;
    metrics_.satellite_certified = true;
    metrics_.time_to_cert_ms = t;
    auto& rec = trace_.add(t, "cert-assembled", "sat");
    rec.bytes = encode(*satellite_->certificate(), spec_.suite).size();
    rec.detail = std::to_string(satellite_->certificate()->endorsements.size()) + " endorsements";
    for (const auto& [gs, cert] : satellite_->broadcast_cert()) {
        (void)cert;
        if (in_pass(gs, t)) {
            clock_.at(t + pass_prop_[gs], [this, gs] { deliver_cert_to_gs(gs, clock_.now()); });
        } // otherwise delivered at the station's next pass start
    }
}

void Engine::on_earth_certified(std::int64_t t) {
    if (metrics_.earth_certified) return;
    metrics_.earth_certified = true;
    metrics_.earth_cert_time_ms = t;
    auto& rec = trace_.add(t, "cert-assembled", "earth-tee");
    rec.detail = std::to_string(earth_->certificate()->endorsements.size()) + " endorsements";
}

void Engine::deliver_cert_to_gs(GsId id, std::int64_t t) {
    if (cert_delivered_.count(id)) return;
    cert_delivered_.insert(id);
    GsAgent& gs = *stations_[id.value];
    const bool ok = gs.handle_cert(*satellite_->certificate());
    auto& rec = trace_.add(t, ok ? "cert-accepted" : "cert-rejected", gs_name(id));
    rec.gs = id.value;
    rec.bytes = encode(*satellite_->certificate(), spec_.suite).size();
    if (ok && !eat_done_) {
        eat_done_ = true;
        run_eat_flow(id, t);
    }
}

void Engine::run_eat_flow(GsId verifier, std::int64_t t) {
    // Post-certificate attestation: genesis bootstrap on first contact, then
    // a fresh nonce appraisal.
    GsAgent& gs = *stations_[verifier.value];
    Nonce nonce = make_nonce(rng_sim_);
    const std::int64_t crypto = spec_.suite.id == SuiteId::ecc_p256_class
                                    ? rng_sim_.uniform_i64(100, 200)
                                    : rng_sim_.uniform_i64(300, 700);
    clock_.at(t + crypto, [this, &gs, nonce, verifier] {
        const std::int64_t now = clock_.now();
        EatToken token = satellite_->issue_eat(nonce, now);
        auto& rec = trace_.add(now, "eat-issued", "sat");
        rec.bytes = encode(token, spec_.suite).size();
        rec.detail = token.degraded ? "degraded" : "dual-anchor";
        try {
            gs.policy() = genesis_bootstrap(gs.policy(), token, satellite_->genesis_slot_reports());
        } catch (const Error& e) {
            metrics_.eat_result = std::string("bootstrap-failed: ") + e.what();
            trace_.add(now, "eat-rejected", gs_name(verifier)).detail = metrics_.eat_result;
            return;
        }
        auto result = appraise_eat(gs.policy(), token, nonce, now + pass_prop_[verifier]);
        switch (result.status) {
            case AppraisalStatus::accept: metrics_.eat_result = "accept"; break;
            case AppraisalStatus::accept_degraded: metrics_.eat_result = "accept-degraded"; break;
            case AppraisalStatus::reject: metrics_.eat_result = "reject: " + result.reason; break;
        }
        trace_.add(now, "eat-appraised", gs_name(verifier)).detail = metrics_.eat_result;
    });
}

void Engine::count_drop(const std::string& reason, std::int64_t t, const std::string& actor,
                        const std::string& detail) {
    ++metrics_.drop_reasons[reason];
    auto& rec = trace_.add(t, "drop", actor);
    rec.detail = detail + ": " + reason;
}

Outcome Engine::decide_outcome() const {
    switch (spec_.adversary.strategy) {
        case AdversaryStrategy::passive:
        case AdversaryStrategy::block_all:
            return metrics_.satellite_certified ? Outcome::certified : Outcome::timeout;
        case AdversaryStrategy::channel_hop:
        case AdversaryStrategy::relay:
            return metrics_.earth_certified ? Outcome::attack_succeeded : Outcome::attack_failed;
        case AdversaryStrategy::mitm_clone:
            return metrics_.earth_certified && !metrics_.satellite_certified
                       ? Outcome::attack_succeeded
                       : Outcome::attack_failed;
        case AdversaryStrategy::randomized_harvest:
            if (metrics_.earth_certified) return Outcome::attack_succeeded;
            return metrics_.satellite_certified ? Outcome::certified : Outcome::timeout;
    }
    return Outcome::timeout;
}

void Engine::finalize_metrics() {
    if (metrics_.time_to_cert_ms) {
        metrics_.orbits_to_completion = static_cast<int>(
            (*metrics_.time_to_cert_ms + spec_.orbit_period_ms - 1) / spec_.orbit_period_ms);
    }
    std::set<GsId> earth_ids;
    std::vector<EndorsementEvent> harvested;
    for (const auto& ev : metrics_.endorsements) {
        if (!ev.to_earth_tee) continue;
        earth_ids.insert(ev.gs);
        if (ev.over_corrupted_channel && !ev.sender_corrupted) harvested.push_back(ev);
    }
    metrics_.earth_distinct_endorsers = static_cast<int>(earth_ids.size());
    std::sort(harvested.begin(), harvested.end(),
              [](const auto& a, const auto& b) { return a.ts_ms < b.ts_ms; });
    int best = 0;
    for (std::size_t i = 0; i < harvested.size(); ++i) {
        std::set<GsId> ids;
        for (std::size_t j = i; j < harvested.size() &&
                                harvested[j].ts_ms - harvested[i].ts_ms < spec_.window_ms;
             ++j) {
            ids.insert(harvested[j].gs);
        }
        best = std::max(best, static_cast<int>(ids.size()));
    }
    metrics_.max_corrupted_window_yield = best;
}

RunResult Engine::run() {
    setup();
    while (!clock_.empty() && clock_.next_time() <= spec_.deadline_ms) {
        clock_.step();
    }
    finalize_metrics();
    RunResult result;
    result.outcome = decide_outcome();
    result.metrics = std::move(metrics_);
    result.trace = std::move(trace_);
    result.satellite_cert = satellite_->certificate();
    if (earth_) result.earth_cert = earth_->certificate();
    result.committee = registry_;
    return result;
}

} // namespace

RunResult run_scenario(const ScenarioSpec& spec) {
    Engine engine(spec);
    return engine.run();
}

RunResult run_posterior_corruption_scenario(std::uint64_t seed, const EpochPlan& plan) {
    // Rotation-with-deletion regression: a small genesis committee hands over
    // to a larger one and is then fully corrupted. No old-epoch signature can
    // be produced afterwards.
    DetRng rng(seed);
    RunResult result;
    EventTrace& trace = result.trace;
    const CryptoSuite& suite = CryptoSuite::get(SuiteId::ecc_p256_class);

    if (plan.genesis_members < 1 || plan.next_members < 1 || plan.t_percent < 0 ||
        plan.t_percent > 100) {
        throw Error(ErrorCode::config_invalid, "bad epoch plan");
    }
    const int kGenesisSize = plan.genesis_members;
    const int kNextSize = plan.next_members;
    const int kTPercent = plan.t_percent;

    std::vector<std::unique_ptr<GsAgent>> members;
    Committee genesis;
    genesis.epoch = 0;
    genesis.t_percent = kTPercent;
    for (int i = 0; i < kGenesisSize; ++i) {
        KeyPair kp = generate_keypair(suite, rng.next_u64());
        genesis.members.emplace_back(GsId{static_cast<std::uint32_t>(i)}, kp.public_key);
        members.push_back(std::make_unique<GsAgent>(GsId{static_cast<std::uint32_t>(i)}, kp,
                                                    KeyRegistry(0), 6000, VerifierPolicy{}));
    }
    trace.add(0, "committee", "committee").detail =
        "epoch 0 with " + std::to_string(kGenesisSize) + " members";

    SatelliteAgent::Options opts;
    opts.suite = suite;
    opts.params = {genesis.gs_fault_bound(), 0, 6000};
    SatelliteAgent satellite(opts, genesis.registry());
    satellite.on_boot(rng);
    const Hash32 measurement_before = satellite.measurement();

    Committee next;
    next.epoch = 1;
    next.t_percent = kTPercent;
    for (int i = 0; i < kNextSize; ++i) {
        KeyPair kp = generate_keypair(suite, rng.next_u64());
        next.members.emplace_back(GsId{static_cast<std::uint32_t>(100 + i)}, kp.public_key);
    }

    std::vector<GsId> signer_ids;
    for (const auto& m : members) signer_ids.push_back(m->id());
    auto live_key = [&](GsId id) -> const KeyPair* {
        return &members[id.value]->keypair();
    };
    auto handover = propose_and_sign_handover(genesis, next.members, signer_ids, live_key);
    if (!handover) {
        trace.add(1, "handover", "committee").detail = "unexpectedly absent";
        result.outcome = Outcome::attack_succeeded;
        return result;
    }
    trace.add(1, "handover", "committee").detail =
        std::to_string(handover->signatures.size()) + " signatures";

    // Honest members rotate once the certificate exists; old handles die.
    for (auto& m : members) m->rotate_key(rng);
    trace.add(2, "rotate", "committee").detail = "all epoch-0 keys deleted";

    // The satellite accepts the honest handover and re-measures.
    satellite.update_committee(*handover);
    const bool measurement_changed = satellite.measurement() != measurement_before;
    trace.add(3, "committee-update", "sat").detail =
        measurement_changed ? "trust store swapped; measurement changed" : "measurement unchanged";

    // Posterior corruption: the adversary now owns every epoch-0 member.
    trace.add(4, "corrupt-gs", "adversary").detail =
        "all " + std::to_string(kGenesisSize) + " genesis members corrupted";

    bool forgery_possible = false;

    // Attempt 1: sign a handover to an adversary committee with the deleted
    // epoch-0 keys.
    std::vector<std::pair<GsId, Bytes>> fake_committee;
    for (int i = 0; i < 3; ++i) {
        KeyPair kp = generate_keypair(suite, rng.next_u64());
        fake_committee.emplace_back(GsId{static_cast<std::uint32_t>(900 + i)}, kp.public_key);
    }
    int deleted_key_failures = 0;
    try {
        auto stolen_old_key = [&](GsId id) -> const KeyPair* {
            return &members[id.value]->retired_keypair();
        };
        propose_and_sign_handover(genesis, fake_committee, signer_ids, stolen_old_key);
        forgery_possible = true;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::deleted_key) ++deleted_key_failures;
    }
    trace.add(5, "forgery-attempt", "adversary").detail =
        deleted_key_failures > 0 ? "old-key signing failed: deleted-key" : "old-key signing succeeded";

    // Attempt 2: a fabricated handover signed with the members' current
    // (post-rotation) keys must not verify under the epoch-0 registry.
    HandoverCertificate fake;
    fake.new_committee = fake_committee;
    fake.old_epoch = 0;
    const Bytes fake_body = fake.signing_body();
    for (const auto& m : members) {
        fake.signatures.emplace_back(m->id(), sign(m->keypair(), fake_body));
    }
    CommitteeChain bad_chain;
    bad_chain.epochs = {genesis, Committee{1, fake_committee, kTPercent}};
    bad_chain.handovers = {fake};
    if (verify_handover_chain(bad_chain, genesis)) forgery_possible = true;
    SatelliteAgent fresh_view(opts, genesis.registry());
    fresh_view.on_boot(rng);
    bool fake_rejected = false;
    try {
        fresh_view.update_committee(fake);
    } catch (const Error& e) {
        fake_rejected = e.code() == ErrorCode::invalid_handover;
    }
    if (!fake_rejected) forgery_possible = true;
    trace.add(6, "forgery-attempt", "adversary").detail =
        fake_rejected ? "fabricated handover rejected" : "fabricated handover accepted";

    // The honest chain still verifies.
    CommitteeChain good_chain;
    good_chain.epochs = {genesis, next};
    good_chain.handovers = {*handover};
    const bool honest_ok = verify_handover_chain(good_chain, genesis);
    trace.add(7, "chain-verify", "committee").detail = honest_ok ? "honest chain valid" : "honest chain broken";

    result.outcome = (!forgery_possible && honest_ok && measurement_changed)
                         ? Outcome::attack_failed
                         : Outcome::attack_succeeded;
    return result;
}

RunResult run_genesis_clone_scenario(std::uint64_t seed) {
    // A ground clone of the launched device performs its own key genesis; its
    // keys and serials differ, so the verifier rejects its evidence.
    DetRng rng(seed);
    RunResult result;
    EventTrace& trace = result.trace;
    const CryptoSuite& suite = CryptoSuite::get(SuiteId::ecc_p256_class);

    KeyRegistry registry(0);
    KeyPair verifier_key = generate_keypair(suite, rng.next_u64());
    registry.put(GsId{0}, verifier_key.public_key);

    SatelliteAgent::Options real_opts;
    real_opts.suite = suite;
    real_opts.params = {0, 0, 6000};
    SatelliteAgent real(real_opts, registry);
    real.on_boot(rng);
    trace.add(0, "boot", "sat").detail = "on-orbit genesis";

    VerifierPolicy policy;
    policy.reference_measurement = real.measurement();
    policy.registered_serials = {real.closed_element().serial(), real.open_element().serial()};
    policy.nonce_ttl_ms = 6000;

    // Genesis EAT from the launched device pins the attestation anchors.
    Nonce n1 = make_nonce(rng);
    EatToken genuine = real.issue_eat(n1, 1000);
    policy = genesis_bootstrap(policy, genuine, real.genesis_slot_reports());
    const bool genuine_accepted = appraise_eat(policy, genuine, n1, 1100).accepted();
    trace.add(1, "eat-appraised", "verifier").detail =
        genuine_accepted ? "genuine device accepted" : "genuine device rejected";

    // The clone boots identical software on different silicon.
    SatelliteAgent::Options clone_opts = real_opts;
    clone_opts.closed_serial = "00000000000000e1";
    clone_opts.open_serial = "00000000000000e2";
    SatelliteAgent clone(clone_opts, registry);
    clone.on_boot(rng);
    trace.add(2, "boot", "earth-tee").detail = "clone genesis on the ground";

    const bool distinct_keys = clone.identity_vk() != real.identity_vk();
    trace.add(3, "key-compare", "verifier").detail =
        distinct_keys ? "clone produced distinct key pair" : "clone key collision";

    // Bootstrapping from the clone must fail on the serial check.
    bool clone_bootstrap_rejected = false;
    Nonce n2 = make_nonce(rng);
    EatToken clone_token = clone.issue_eat(n2, 2000);
    try {
        VerifierPolicy fresh;
        fresh.reference_measurement = real.measurement();
        fresh.registered_serials = policy.registered_serials;
        fresh.nonce_ttl_ms = 6000;
        genesis_bootstrap(fresh, clone_token, clone.genesis_slot_reports());
    } catch (const Error& e) {
        clone_bootstrap_rejected = e.code() == ErrorCode::serial_mismatch;
    }
    trace.add(4, "genesis-bootstrap", "verifier").detail =
        clone_bootstrap_rejected ? "clone rejected: serial-mismatch" : "clone accepted";

    // Appraisal of clone evidence under the pinned policy also fails.
    auto clone_appraisal = appraise_eat(policy, clone_token, n2, 2100);
    const bool clone_rejected = !clone_appraisal.accepted();
    trace.add(5, "eat-appraised", "verifier").detail =
        clone_rejected ? "clone token rejected: " + clone_appraisal.reason : "clone token accepted";

    // Premature re-genesis on the launched device is refused by the
    // slot-empty check.
    bool regenesis_blocked = false;
    try {
        DetRng attacker_rng(seed ^ 0xdead);
        real.closed_element().genesis(suite, attacker_rng);
    } catch (const Error& e) {
        regenesis_blocked = e.code() == ErrorCode::slots_occupied;
    }
    trace.add(6, "re-genesis", "adversary").detail =
        regenesis_blocked ? "blocked: slots-occupied" : "second genesis allowed";

    result.outcome = (genuine_accepted && distinct_keys && clone_bootstrap_rejected &&
                      clone_rejected && regenesis_blocked)
                         ? Outcome::attack_failed
                         : Outcome::attack_succeeded;
    return result;
}

ScenarioSpec make_randomized_adversary_spec(std::uint64_t seed) {
    DetRng rng(seed);
    ScenarioSpec spec;
    spec.name = "randomized-harvest";
    spec.seed = rng.next_u64();
    spec.n_gs = static_cast<int>(rng.uniform(6, 12));
    spec.t_percent = static_cast<int>(rng.uniform(0, 3)) * 10;
    spec.channel_fault_bound = static_cast<int>(rng.uniform(0, 2));
    spec.window_ms = rng.uniform_i64(4000, 12000);
    spec.deadline_ms = 60'000 + rng.uniform_i64(0, 30'000);
    spec.schedule = ScheduleKind::geo;
    spec.retry_interval_ms = spec.window_ms;
    spec.identity_checks = false; // strongest adversary: clone indistinguishable
    spec.adversary.strategy = AdversaryStrategy::randomized_harvest;

    // Station corruptions, within budget, at random times.
    const int budget = spec.gs_fault_bound();
    std::vector<std::uint32_t> ids(static_cast<std::size_t>(spec.n_gs));
    for (int i = 0; i < spec.n_gs; ++i) ids[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i);
    for (std::size_t i = ids.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.uniform(0, i - 1));
        std::swap(ids[i - 1], ids[j]);
    }
    const int corrupt_n = budget > 0 ? static_cast<int>(rng.uniform(0, static_cast<std::uint64_t>(budget))) : 0;
    for (int i = 0; i < corrupt_n; ++i) {
        spec.adversary.gs_corruption_times[GsId{ids[static_cast<std::size_t>(i)]}] =
            rng.uniform_i64(0, spec.deadline_ms / 2);
    }

    // Channel corruptions: trial-inserted against a scratch table so the
    // schedule always respects the concurrency and window bounds. One MitM
    // per channel at a time: same-channel overlaps are skipped.
    ChannelTable scratch(spec.window_ms, spec.channel_fault_bound);
    const int attempts = spec.channel_fault_bound * 3;
    for (int i = 0; i < attempts; ++i) {
        GsId gs{static_cast<std::uint32_t>(rng.uniform(0, static_cast<std::uint64_t>(spec.n_gs - 1)))};
        std::int64_t start = rng.uniform_i64(0, std::max<std::int64_t>(spec.deadline_ms - spec.window_ms, 1));
        std::int64_t len = spec.window_ms + rng.uniform_i64(0, spec.window_ms);
        bool overlaps_same_channel = false;
        for (const auto& [g, s, e] : spec.adversary.channel_schedule) {
            if (g == gs && start < e && s < start + len) overlaps_same_channel = true;
        }
        if (overlaps_same_channel) continue;
        try {
            scratch.corrupt(gs, start, start + len);
            spec.adversary.channel_schedule.emplace_back(gs, start, start + len);
        } catch (const Error&) {
            // budget exhausted at that instant; skip
        }
    }
    return spec;
}

} // namespace seap::sim
