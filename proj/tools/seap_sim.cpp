#include <atomic>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "seap/scenario.hpp"

namespace {

using seap::cli::Json;

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<std::int64_t> deadline_ms, const std::string& out_path,
            const std::string& trace_path, bool json_stdout) {
    seap::cli::ScenarioCase scenario;
    try {
        scenario = seap::cli::load_scenario_file(config_path);
        if (seed) scenario.spec.seed = *seed;
        if (deadline_ms) scenario.spec.deadline_ms = *deadline_ms;
        if (scenario.kind == seap::cli::ScenarioKind::network &&
            scenario.spec.required_endorsements() > scenario.spec.n_gs) {
            std::cerr << "warning: quorum " << scenario.spec.required_endorsements() << " exceeds "
                      << scenario.spec.n_gs << " stations; an honest run cannot certify\n";
        }
    } catch (const seap::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    seap::sim::RunResult result = seap::cli::run_case(scenario);
    Json report = seap::cli::build_run_report(scenario, result);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << report.dump(2) << "\n";
    }
    if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        out << result.trace.to_ndjson();
    }
    if (json_stdout || out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    }
    std::cout << scenario.name << ": " << seap::sim::outcome_name(result.outcome) << " (expected "
              << seap::sim::outcome_name(scenario.expected) << ")\n";
    return report["as_expected"].get<bool>() ? 0 : 1;
}

int cmd_gallery(std::uint64_t seed, const std::string& only, int sweep, bool json_stdout) {
    const int runs = std::max(sweep, 1);
    std::vector<seap::cli::GalleryResult> results(static_cast<std::size_t>(runs));

    // Seed sweeps fan out over worker threads; each run owns an isolated
    // engine, so the per-seed results are identical to a serial sweep.
    const unsigned workers =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                           static_cast<unsigned>(runs));
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next.fetch_add(1); i < runs; i = next.fetch_add(1)) {
            results[static_cast<std::size_t>(i)] =
                seap::cli::run_gallery(seed + static_cast<std::uint64_t>(i), only);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();

    bool all_pass = true;
    for (const auto& gallery : results) all_pass = all_pass && gallery.all_pass;

    const auto& first = results.front();
    if (json_stdout) {
        Json doc = Json::array();
        for (const auto& row : first.rows) {
            Json r;
            r["name"] = row.name;
            r["expected"] = seap::sim::outcome_name(row.expected);
            r["actual"] = seap::sim::outcome_name(row.actual);
            r["pass"] = row.pass;
            doc.push_back(r);
        }
        std::cout << doc.dump(2) << "\n";
    } else {
        for (const auto& row : first.rows) {
            std::cout << row.name << ": expected=" << seap::sim::outcome_name(row.expected)
                      << " actual=" << seap::sim::outcome_name(row.actual)
                      << (row.pass ? " [ok]" : " [MISMATCH]") << "\n";
        }
    }
    if (runs > 1) {
        std::cout << runs << " seed(s) swept\n";
    }
    std::cout << (all_pass ? "gallery: all outcomes as expected\n" : "gallery: MISMATCH\n");
    return all_pass ? 0 : 1;
}

int cmd_report(const std::string& kind, const std::string& suite_name, bool json_stdout) {
    Json report;
    try {
        const seap::CryptoSuite& suite = seap::CryptoSuite::by_name(suite_name);
        if (kind == "latency") {
            report = seap::cli::latency_report(suite);
        } else if (kind == "bandwidth") {
            report = seap::cli::bandwidth_report(suite);
        } else if (kind == "cert-time") {
            report = seap::cli::cert_time_report();
        } else {
            std::cerr << "unknown report kind: " << kind << " (latency|bandwidth|cert-time)\n";
            return 2;
        }
    } catch (const seap::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    if (json_stdout) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << seap::cli::render_report_text(report);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SEAP endorsement-quorum simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string trace_path;
    std::string only_scenario;
    std::string report_kind;
    std::string suite_name = "ecc-p256-class";
    std::uint64_t seed = 1;
    bool have_seed = false;
    std::int64_t deadline_ms = 0;
    bool json_stdout = false;
    int sweep = 1;

    auto* run = app.add_subcommand("run", "run a scenario from a config file");
    run->add_option("--config", config_path, "scenario config JSON")->required();
    run->add_option("--seed", seed, "override the config seed")->each([&](const std::string&) {
        have_seed = true;
    });
    run->add_option("--deadline-ms", deadline_ms, "override the config deadline");
    run->add_option("--out", out_path, "write the JSON report here");
    run->add_option("--trace", trace_path, "export the event trace as NDJSON");
    run->add_flag("--json", json_stdout, "print the JSON report to stdout");

    auto* gallery = app.add_subcommand("gallery", "run the named attack/regression scenarios");
    gallery->add_option("--seed", seed, "base seed");
    gallery->add_option("--scenario", only_scenario, "run a single named scenario");
    gallery->add_option("--sweep", sweep, "repeat across consecutive seeds");
    gallery->add_flag("--json", json_stdout, "print the matrix as JSON");

    auto* report = app.add_subcommand("report", "print a performance-model table");
    report->add_option("kind", report_kind, "latency | bandwidth | cert-time")->required();
    report->add_option("--suite", suite_name, "crypto suite name");
    report->add_flag("--json", json_stdout, "print as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            return cmd_run(config_path, have_seed ? std::optional(seed) : std::nullopt,
                           deadline_ms > 0 ? std::optional(deadline_ms) : std::nullopt, out_path,
                           trace_path, json_stdout);
        }
        if (gallery->parsed()) {
            return cmd_gallery(seed, only_scenario, sweep, json_stdout);
        }
        if (report->parsed()) {
            return cmd_report(report_kind, suite_name, json_stdout);
        }
    } catch (const seap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
