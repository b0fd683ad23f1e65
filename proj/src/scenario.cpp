#include "seap/scenario.hpp"

#include <fstream>

#include "seap/codec.hpp"

namespace seap::cli {

namespace {

sim::Outcome outcome_from_name(const std::string& name) {
    for (auto o : {sim::Outcome::certified, sim::Outcome::timeout, sim::Outcome::attack_succeeded,
                   sim::Outcome::attack_failed}) {
        if (name == sim::outcome_name(o)) return o;
    }
    throw Error(ErrorCode::config_invalid, "unknown outcome: " + name);
}

sim::AdversaryStrategy strategy_from_name(const std::string& name) {
    for (auto s : {sim::AdversaryStrategy::passive, sim::AdversaryStrategy::channel_hop,
                   sim::AdversaryStrategy::mitm_clone, sim::AdversaryStrategy::relay,
                   sim::AdversaryStrategy::block_all}) {
        if (name == sim::strategy_name(s)) return s;
    }
    throw Error(ErrorCode::config_invalid, "unknown adversary strategy: " + name);
}

constexpr std::int64_t kLeoOrbitMs = 5'700'000; // 95 min
constexpr std::int64_t kTwelveHoursMs = 43'200'000;

} // namespace

std::vector<std::string> gallery_names() {
    return {"honest-leo",  "honest-geo", "channel-hop",          "relay-on",     "relay-off",
            "mitm-all",    "block-all",  "posterior-corruption", "genesis-clone"};
}

ScenarioCase make_named_scenario(const std::string& name, std::uint64_t seed) {
    ScenarioCase c;
    c.name = name;
    c.spec.name = name;
    c.spec.seed = seed;
    if (name == "honest-leo") {
        c.spec.n_gs = 10;
        c.spec.t_percent = 20;
        c.spec.channel_fault_bound = 2;
        c.spec.window_ms = kTwelveHoursMs;
        c.spec.schedule = sim::ScheduleKind::leo;
        c.spec.orbit_period_ms = kLeoOrbitMs;
        c.spec.contacts_per_orbit = {1, 2};
        c.spec.deadline_ms = 20 * kLeoOrbitMs;
        c.expected = sim::Outcome::certified;
    } else if (name == "honest-geo") {
        c.spec.n_gs = 10;
        c.spec.t_percent = 20;
        c.spec.channel_fault_bound = 2;
        c.spec.window_ms = 300'000; // visibility is permanent; minutes suffice
        c.spec.schedule = sim::ScheduleKind::geo;
        c.spec.deadline_ms = 1'800'000;
        c.expected = sim::Outcome::certified;
    } else if (name == "channel-hop") {
        c.spec.n_gs = 2;
        c.spec.t_percent = 0;
        c.spec.channel_fault_bound = 1;
        c.spec.window_ms = 6000;
        c.spec.schedule = sim::ScheduleKind::geo;
        c.spec.deadline_ms = 20'000;
        c.spec.retry_interval_ms = 6000;
        c.spec.identity_checks = false; // the clone is otherwise indistinguishable
        c.spec.adversary.strategy = sim::AdversaryStrategy::channel_hop;
        c.expected = sim::Outcome::attack_failed;
    } else if (name == "relay-on" || name == "relay-off") {
        c.spec.n_gs = 10;
        c.spec.t_percent = 20;
        c.spec.channel_fault_bound = 2;
        c.spec.window_ms = 6000;
        c.spec.schedule = sim::ScheduleKind::geo;
        c.spec.deadline_ms = 30'000;
        c.spec.retry_interval_ms = 6000;
        c.spec.adversary.strategy = sim::AdversaryStrategy::relay;
        c.spec.identity_checks = name == "relay-on"; // serial pinning on/off
        c.expected = name == "relay-on" ? sim::Outcome::attack_failed : sim::Outcome::attack_succeeded;
    } else if (name == "mitm-all") {
        c.spec.n_gs = 10;
        c.spec.t_percent = 20;
        c.spec.channel_fault_bound = 2;
        c.spec.window_ms = 6000;
        c.spec.schedule = sim::ScheduleKind::geo;
        c.spec.deadline_ms = 30'000;
        c.spec.retry_interval_ms = 6000;
        c.spec.identity_checks = false;
        c.spec.adversary.strategy = sim::AdversaryStrategy::mitm_clone;
        c.spec.adversary.override_channel_bound = true; // assumption-violating by design
        c.expected = sim::Outcome::attack_succeeded;
    } else if (name == "block-all") {
        c.spec.n_gs = 10;
        c.spec.t_percent = 20;
        c.spec.channel_fault_bound = 2;
        c.spec.window_ms = kTwelveHoursMs;
        c.spec.schedule = sim::ScheduleKind::leo;
        c.spec.orbit_period_ms = kLeoOrbitMs;
        c.spec.contacts_per_orbit = {1, 2};
        c.spec.deadline_ms = 3 * kLeoOrbitMs;
        c.spec.adversary.strategy = sim::AdversaryStrategy::block_all;
        c.expected = sim::Outcome::timeout;
    } else if (name == "posterior-corruption") {
        c.kind = ScenarioKind::posterior_corruption;
        c.expected = sim::Outcome::attack_failed;
    } else if (name == "genesis-clone") {
        c.kind = ScenarioKind::genesis_clone;
        c.expected = sim::Outcome::attack_failed;
    } else {
        throw Error(ErrorCode::config_invalid, "unknown scenario: " + name);
    }
    return c;
}

sim::RunResult run_case(const ScenarioCase& c) {
    switch (c.kind) {
        case ScenarioKind::network: return sim::run_scenario(c.spec);
        case ScenarioKind::posterior_corruption:
            return sim::run_posterior_corruption_scenario(c.spec.seed, c.epochs);
        case ScenarioKind::genesis_clone: return sim::run_genesis_clone_scenario(c.spec.seed);
    }
    throw Error(ErrorCode::config_invalid, "unknown scenario kind");
}

GalleryResult run_gallery(std::uint64_t seed, const std::string& only) {
    GalleryResult result;
    for (const auto& name : gallery_names()) {
        if (!only.empty() && name != only) continue;
        ScenarioCase c = make_named_scenario(name, seed);
        sim::RunResult run = run_case(c);
        GalleryRow row{name, c.expected, run.outcome, run.outcome == c.expected};
        result.all_pass = result.all_pass && row.pass;
        result.rows.push_back(row);
    }
    if (result.rows.empty()) {
        throw Error(ErrorCode::config_invalid, "no scenario named " + only);
    }
    return result;
}

ScenarioCase parse_scenario_config(const Json& doc) {
    try {
        ScenarioCase c;
        c.name = doc.value("name", std::string("scenario"));
        const std::string kind = doc.value("kind", std::string("network"));
        if (kind == "posterior-corruption") {
            c.kind = ScenarioKind::posterior_corruption;
        } else if (kind == "genesis-clone") {
            c.kind = ScenarioKind::genesis_clone;
        } else if (kind != "network") {
            throw Error(ErrorCode::config_invalid, "unknown kind: " + kind);
        }
        c.spec.name = c.name;
        c.spec.seed = doc.value("seed", 1ULL);
        if (c.kind != ScenarioKind::network) {
            if (doc.contains("epochs")) {
                const auto& plan = doc.at("epochs");
                c.epochs.genesis_members = plan.value("genesis_members", c.epochs.genesis_members);
                c.epochs.next_members = plan.value("next_members", c.epochs.next_members);
                c.epochs.t_percent = plan.value("t_percent", c.epochs.t_percent);
            }
            if (doc.contains("expected_outcome")) {
                c.expected = outcome_from_name(doc.at("expected_outcome").get<std::string>());
            } else {
                c.expected = sim::Outcome::attack_failed;
            }
            return c;
        }

        const auto& committee = doc.at("committee");
        c.spec.n_gs = committee.at("n").get<int>();
        c.spec.t_percent = committee.at("t_percent").get<int>();
        c.spec.channel_fault_bound = doc.at("t_ch").get<int>();
        c.spec.window_ms = doc.at("w_ms").get<std::int64_t>();
        c.spec.suite = CryptoSuite::by_name(doc.value("suite", std::string("ecc-p256-class")));
        c.spec.deadline_ms = doc.at("deadline_ms").get<std::int64_t>();
        c.spec.parallel_se = doc.value("parallel_se", false);
        c.spec.identity_checks = doc.value("identity_checks", true);
        c.spec.degraded_mode_allowed = doc.value("degraded_mode_allowed", false);
        c.spec.clock_skew_ms = doc.value("clock_skew_ms", 0);
        c.spec.retry_interval_ms = doc.value("retry_interval_ms", 0);
        c.spec.nonce_bytes = doc.value("nonce_bytes", kDefaultNonceBytes);

        const auto& sched = doc.at("schedule");
        const std::string tmpl = sched.value("template", std::string("leo"));
        if (tmpl == "leo") {
            c.spec.schedule = sim::ScheduleKind::leo;
            c.spec.orbit_period_ms = sched.value("orbit_period_ms", kLeoOrbitMs);
            if (sched.contains("contacts_per_orbit")) {
                const auto& r = sched.at("contacts_per_orbit");
                c.spec.contacts_per_orbit = {r.at(0).get<std::int64_t>(), r.at(1).get<std::int64_t>()};
            }
        } else if (tmpl == "geo") {
            c.spec.schedule = sim::ScheduleKind::geo;
            c.spec.orbit_period_ms = sched.value("orbit_period_ms", kLeoOrbitMs);
        } else if (tmpl == "explicit") {
            c.spec.schedule = sim::ScheduleKind::explicit_passes;
            c.spec.orbit_period_ms = sched.value("orbit_period_ms", kLeoOrbitMs);
            for (const auto& p : sched.at("passes")) {
                c.spec.explicit_passes.push_back({GsId{p.at("gs").get<std::uint32_t>()},
                                                  p.at("start_ms").get<std::int64_t>(),
                                                  p.at("duration_ms").get<std::int64_t>()});
            }
        } else {
            throw Error(ErrorCode::config_invalid, "unknown schedule template: " + tmpl);
        }

        if (doc.contains("adversary")) {
            const auto& adv = doc.at("adversary");
            c.spec.adversary.strategy =
                strategy_from_name(adv.value("strategy", std::string("passive")));
            c.spec.adversary.override_channel_bound = adv.value("override_channel_bound", false);
            if (adv.contains("earth_threshold_override") &&
                !adv.at("earth_threshold_override").is_null()) {
                c.spec.adversary.earth_threshold_override =
                    adv.at("earth_threshold_override").get<int>();
            }
            for (const auto& cc : adv.value("channel_corruptions", Json::array())) {
                c.spec.adversary.channel_schedule.emplace_back(GsId{cc.at("gs").get<std::uint32_t>()},
                                                               cc.at("start_ms").get<std::int64_t>(),
                                                               cc.at("end_ms").get<std::int64_t>());
            }
            for (const auto& gc : adv.value("gs_corruptions", Json::array())) {
                c.spec.adversary.gs_corruption_times[GsId{gc.at("gs").get<std::uint32_t>()}] =
                    gc.at("at_ms").get<std::int64_t>();
            }
        }

        if (doc.contains("expected_outcome")) {
            c.expected = outcome_from_name(doc.at("expected_outcome").get<std::string>());
        } else {
            // Sensible defaults per strategy.
            switch (c.spec.adversary.strategy) {
                case sim::AdversaryStrategy::passive: c.expected = sim::Outcome::certified; break;
                case sim::AdversaryStrategy::block_all: c.expected = sim::Outcome::timeout; break;
                case sim::AdversaryStrategy::mitm_clone:
                    c.expected = sim::Outcome::attack_succeeded;
                    break;
                default: c.expected = sim::Outcome::attack_failed; break;
            }
        }
        // Feasibility warning surface: an honest run cannot certify if the
        // quorum exceeds the committee.
        c.spec.validate();
        return c;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::config_invalid, e.what());
    }
}

ScenarioCase load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::config_invalid, "cannot read " + path);
    Json doc;
    try {
        in >> doc;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::config_invalid, std::string("json parse: ") + e.what());
    }
    return parse_scenario_config(doc);
}

Json build_run_report(const ScenarioCase& c, const sim::RunResult& result) {
    const auto& m = result.metrics;
    Json report;
    report["schema_version"] = kReportSchemaVersion;
    report["scenario"] = c.name;
    report["seed"] = c.spec.seed;
    report["suite"] = c.spec.suite.name;
    report["outcome"] = sim::outcome_name(result.outcome);
    report["expected_outcome"] = sim::outcome_name(c.expected);
    report["as_expected"] = result.outcome == c.expected;
    if (m.time_to_cert_ms) {
        report["time_to_cert_ms"] = *m.time_to_cert_ms;
        report["orbits_to_completion"] = m.orbits_to_completion;
        report["hours_to_cert"] = static_cast<double>(*m.time_to_cert_ms) / 3'600'000.0;
    }
    Json timeline = Json::array();
    for (const auto& ev : m.endorsements) {
        Json e;
        e["ts_ms"] = ev.ts_ms;
        e["gs"] = ev.gs.value;
        e["to_earth_tee"] = ev.to_earth_tee;
        e["sender_corrupted"] = ev.sender_corrupted;
        e["over_corrupted_channel"] = ev.over_corrupted_channel;
        timeline.push_back(e);
    }
    report["endorsement_timeline"] = timeline;

    Json exchanges = Json::array();
    for (const auto& x : m.exchanges) {
        Json e;
        e["gs"] = x.gs.value;
        e["start_ms"] = x.hello_sent_ms;
        e["duration_ms"] = x.duration_ms();
        e["hello_bytes"] = x.hello_bytes;
        e["hello_ack_bytes"] = x.hello_ack_bytes;
        e["key_verify_bytes"] = x.key_verify_bytes;
        e["total_bytes"] = x.total_bytes();
        e["with_earth_tee"] = x.with_earth_tee;
        exchanges.push_back(e);
    }
    report["exchanges"] = exchanges;

    auto model = perf::bandwidth_model(c.spec.suite,
                                       static_cast<std::size_t>(c.spec.required_endorsements()));
    Json bpe;
    bpe["hello"] = model.hello_bytes;
    bpe["hello_ack"] = model.hello_ack_bytes;
    bpe["key_verify"] = model.key_verify_bytes;
    bpe["total"] = model.exchange_total_bytes;
    report["bytes_per_exchange"] = bpe;

    Json drops = Json::object();
    for (const auto& [reason, count] : m.drop_reasons) drops[reason] = count;
    report["drop_reasons"] = drops;
    if (!m.eat_result.empty()) report["eat_result"] = m.eat_result;

    Json earth;
    earth["certified"] = m.earth_certified;
    earth["distinct_endorsers"] = m.earth_distinct_endorsers;
    earth["max_corrupted_window_yield"] = m.max_corrupted_window_yield;
    report["earth_tee"] = earth;
    report["trace_records"] = result.trace.size();
    return report;
}

Json latency_report(const CryptoSuite& suite) {
    Json out;
    out["schema_version"] = kReportSchemaVersion;
    out["kind"] = "latency";
    out["suite"] = suite.name;
    auto range = [](const IntRange& r) { return Json::array({r.lo, r.hi}); };
    for (bool parallel : {false, true}) {
        auto model = perf::latency_model(suite, parallel);
        Json row;
        row["propagation_ms"] = range(model.propagation_ms);
        row["onboard_crypto_ms"] = range(model.onboard_crypto_ms);
        row["gs_verification_ms"] = range(model.gs_verification_ms);
        row["total_ms"] = range(model.total(parallel));
        out[parallel ? "parallel" : "sequential"] = row;
    }
    return out;
}

Json bandwidth_report(const CryptoSuite& suite) {
    auto model = perf::bandwidth_model(suite);
    Json out;
    out["schema_version"] = kReportSchemaVersion;
    out["kind"] = "bandwidth";
    out["suite"] = suite.name;
    out["hello_bytes"] = model.hello_bytes;
    out["hello_ack_bytes"] = model.hello_ack_bytes;
    out["key_verify_bytes"] = model.key_verify_bytes;
    out["exchange_total_bytes"] = model.exchange_total_bytes;
    out["certificate_bytes"] = model.certificate_bytes;
    out["mlkem_setup_bytes"] = model.mlkem_setup_bytes;
    return out;
}

Json cert_time_report() {
    Json out;
    out["schema_version"] = kReportSchemaVersion;
    out["kind"] = "cert-time";
    Json columns = Json::array();
    struct Column {
        const char* name;
        int t_gs;
        int t_ch;
        IntRange contacts;
    };
    for (const Column& col : {Column{"conservative", 2, 2, {1, 2}}, Column{"moderate", 3, 3, {2, 3}}}) {
        auto est = perf::cert_time_model(col.t_gs, col.t_ch, col.contacts, kLeoOrbitMs);
        Json row;
        row["name"] = col.name;
        row["t_gs"] = col.t_gs;
        row["t_ch"] = col.t_ch;
        row["required_endorsements"] = est.required_endorsements;
        row["contacts_per_orbit"] = Json::array({est.contacts_per_orbit.lo, est.contacts_per_orbit.hi});
        row["orbits_to_completion"] =
            Json::array({est.orbits_to_completion.lo, est.orbits_to_completion.hi});
        row["wall_clock_hours"] = Json::array({est.wall_clock_hours_lo, est.wall_clock_hours_hi});
        columns.push_back(row);
    }
    out["columns"] = columns;
    return out;
}

std::string render_report_text(const Json& report) {
    std::string out;
    const std::string kind = report.value("kind", std::string(""));
    if (kind == "bandwidth") {
        out += "bandwidth model (" + report["suite"].get<std::string>() + ")\n";
        out += "  hello:          " + std::to_string(report["hello_bytes"].get<std::uint64_t>()) + " B\n";
        out += "  hello-ack:      " + std::to_string(report["hello_ack_bytes"].get<std::uint64_t>()) + " B\n";
        out += "  key-verify:     " + std::to_string(report["key_verify_bytes"].get<std::uint64_t>()) + " B\n";
        out += "  exchange total: " + std::to_string(report["exchange_total_bytes"].get<std::uint64_t>()) + " B\n";
        out += "  certificate:    " + std::to_string(report["certificate_bytes"].get<std::uint64_t>()) + " B\n";
        out += "  ml-kem setup:   " + std::to_string(report["mlkem_setup_bytes"].get<std::uint64_t>()) + " B\n";
        return out;
    }
    if (kind == "latency") {
        out += "latency model (" + report["suite"].get<std::string>() + ")\n";
        for (const char* mode : {"sequential", "parallel"}) {
            const auto& row = report[mode];
            auto show = [&](const char* field) {
                return std::to_string(row[field][0].get<std::int64_t>()) + "-" +
                       std::to_string(row[field][1].get<std::int64_t>());
            };
            out += std::string("  ") + mode + ": propagation " + show("propagation_ms") +
                   " ms, crypto " + show("onboard_crypto_ms") + " ms, verification " +
                   show("gs_verification_ms") + " ms, total " + show("total_ms") + " ms\n";
        }
        return out;
    }
    if (kind == "cert-time") {
        out += "certificate-time model\n";
        for (const auto& row : report["columns"]) {
            out += "  " + row["name"].get<std::string>() + ": required " +
                   std::to_string(row["required_endorsements"].get<int>()) + ", orbits " +
                   std::to_string(row["orbits_to_completion"][0].get<std::int64_t>()) + "-" +
                   std::to_string(row["orbits_to_completion"][1].get<std::int64_t>()) + ", hours " +
                   std::to_string(row["wall_clock_hours"][0].get<double>()) + "-" +
                   std::to_string(row["wall_clock_hours"][1].get<double>()) + "\n";
        }
        return out;
    }
    return report.dump(2) + "\n";
}

} // namespace seap::cli
