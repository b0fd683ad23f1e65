#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "seap/simnet.hpp"

namespace seap::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

enum class ScenarioKind { network, posterior_corruption, genesis_clone };

// One runnable scenario plus its expected outcome.
struct ScenarioCase {
    std::string name;
    ScenarioKind kind = ScenarioKind::network;
    sim::ScenarioSpec spec;
    sim::EpochPlan epochs; // committee-rotation plan (lifecycle scenarios)
    sim::Outcome expected = sim::Outcome::certified;
};

// The named attack/regression gallery, in its canonical order.
std::vector<std::string> gallery_names();
ScenarioCase make_named_scenario(const std::string& name, std::uint64_t seed);

sim::RunResult run_case(const ScenarioCase& c);

struct GalleryRow {
    std::string name;
    sim::Outcome expected;
    sim::Outcome actual;
    bool pass = false;
};

struct GalleryResult {
    std::vector<GalleryRow> rows;
    bool all_pass = true;
};

GalleryResult run_gallery(std::uint64_t seed, const std::string& only = "");

// Scenario config document (JSON with explicit units in key names).
ScenarioCase parse_scenario_config(const Json& doc); // throws config_invalid
ScenarioCase load_scenario_file(const std::string& path);

// The machine-readable run report; schema in docs/report_schema.json.
Json build_run_report(const ScenarioCase& c, const sim::RunResult& result);

// Model tables for the report subcommand.
Json latency_report(const CryptoSuite& suite);
Json bandwidth_report(const CryptoSuite& suite);
Json cert_time_report();
std::string render_report_text(const Json& report);

} // namespace seap::cli
