#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "topics_sim/core_model.hpp"
#include "topics_sim/event_log.hpp"
#include "topics_sim/metrics.hpp"
#include "topics_sim/world.hpp"

namespace topics_sim {

// Effective taxonomy size of the reproduction presets, calibrated on the
// fill rates of the many-small-networks theory runs.
inline constexpr std::uint32_t kReproductionTaxonomySize = 30;

// Synthetic stand-in for the 174-network market: head at the dominant
// network's presence, and 77% of networks below 0.03% presence.
inline constexpr MarketShape kMarketShape{174, 0.5924, 2.05, 0.0001};

struct SweepAxis {
  std::string key;  // a SimConfig field name
  std::vector<std::string> values;
};

struct Scenario {
  std::string name;
  SimConfig base;
  std::vector<SweepAxis> axes;
  std::uint32_t replications = 1;
  // Replication r runs with seed seed_base + r.
  std::uint64_t seed_base = 1;
  // User percentile whose pages per epoch and loyalty are already applied to
  // `base`; informational.
  std::optional<int> percentile;
};

struct ConfigPoint {
  std::string label;
  std::vector<std::pair<std::string, std::string>> assignments;
  SimConfig config;  // seed not yet applied
};

// Throws ConfigError for unknown axis keys, empty axes, zero replications, or
// any grid point whose config is invalid.
void validate_scenario(const Scenario& scenario);

// Cartesian product of the axes in declaration order (last axis fastest).
std::vector<ConfigPoint> expand_grid(const Scenario& scenario);

// ---- Presets ---------------------------------------------------------------

// The fixed parameters of the theory experiments.
SimConfig theory_base_config();

struct PresetOptions {
  bool paper_scale = false;
  bool paper_exact = false;
  std::optional<std::uint32_t> users;
  std::optional<std::uint32_t> weeks;
  std::uint32_t replications = 1;
  std::uint64_t seed_base = 1;
};

// Networks {10,25,50,100,200} x presence grid, full interest.
Scenario preset_theory_1(const PresetOptions& options = {});
// 50 networks, interest {0.1..1.0} x presence grid.
Scenario preset_theory_2(const PresetOptions& options = {});
// 174 networks on the synthetic market, browsing from `percentile`. Desk
// scale is 500 users over 20 weeks; full scale is 10,000 users over 55.
// Throws std::invalid_argument for a percentile outside {10,25,50,75,90}.
Scenario preset_market(int percentile, const PresetOptions& options = {});

// Names accepted by make_preset: theory-1, theory-2, market.
Scenario make_preset(const std::string& name, std::optional<int> percentile, const PresetOptions& options);

// Scenario file: SimConfig keys for the base config, plus
//   scenario.name, scenario.replications, scenario.seed_base,
//   scenario.percentile, scenario.presence_file,
//   sweep.<field> = v1,v2,...
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_scenario_file(const std::string& path);

// ---- Execution ---------------------------------------------------------------

struct CampaignRun;

struct CampaignOptions {
  unsigned parallelism = 1;
  bool record_events = false;
  // Called once per run in (point, seed) order, from one thread at a time,
  // as soon as every earlier run has finished.
  std::function<void(const CampaignRun&)> on_run;
};

struct CampaignRun {
  std::size_t point_index = 0;
  std::string label;
  std::uint64_t seed = 0;
  SimConfig config;
  MetricsReport report;
  std::optional<EventLog> events;
};

struct CampaignResult {
  Scenario scenario;
  std::vector<ConfigPoint> points;
  std::vector<CampaignRun> runs;  // ordered by (point, seed)
};

class RunFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs every (point, seed) pair. Results do not depend on `parallelism`.
// Throws ConfigError for an invalid scenario and RunFailure if a run fails.
CampaignResult run_campaign(const Scenario& scenario, const CampaignOptions& options = {});

inline constexpr const char* kCsvHeader =
    "scenario,seed,network_id,presence,eligibility_ratio,low_competition_ratio,sole_competitor_ratio,fill_rate";

// One row per network of `run`, without the header.
void write_csv_rows(std::ostream& out, const CampaignRun& run);
void write_results_csv(std::ostream& out, const CampaignResult& result);
void write_summary_json(std::ostream& out, const CampaignResult& result);

// Runs the campaign and writes results.csv and summary.json (and events.log
// plus topics.jsonl when recording events) into `out_dir`. On a run failure
// a PARTIAL marker file is left in `out_dir` and RunFailure is rethrown.
CampaignResult run_campaign_to_dir(const Scenario& scenario, const CampaignOptions& options,
                                   const std::filesystem::path& out_dir);

}  // namespace topics_sim
