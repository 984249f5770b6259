#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "topics_sim/campaign.hpp"
#include "topics_sim/core_model.hpp"
#include "topics_sim/metrics.hpp"
#include "topics_sim/world.hpp"

namespace {

using namespace topics_sim;

constexpr int kExitConfig = 2;
constexpr int kExitRun = 3;

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::uint32_t replications = 1;
  unsigned parallelism = 1;
  std::string out_dir = "out";
  bool events = false;
  std::optional<std::uint32_t> users;
  std::optional<std::uint32_t> weeks;
  std::string presence_file;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "First seed; replication r uses seed + r (default: $TOPICS_SIM_SEED)");
  cmd->add_option("--replications", flags.replications, "Seeds per config point")->check(CLI::PositiveNumber);
  cmd->add_option("--parallelism", flags.parallelism, "Worker threads (0 = one per core)");
  cmd->add_option("--out", flags.out_dir, "Output directory")->capture_default_str();
  cmd->add_flag("--events", flags.events, "Also write events.log and topics.jsonl");
  cmd->add_option("--users", flags.users, "Override the number of users")->check(CLI::PositiveNumber);
  cmd->add_option("--weeks", flags.weeks, "Override the number of epochs")->check(CLI::PositiveNumber);
  cmd->add_option("--presence-file", flags.presence_file, "Per-network presence, one fraction per line");
}

// --seed, then TOPICS_SIM_SEED, then whatever the scenario already holds.
std::optional<std::uint64_t> resolve_seed(const CommonFlags& flags) {
  if (flags.seed) return flags.seed;
  if (const char* env = std::getenv("TOPICS_SIM_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const auto value = std::stoull(env, &used);
      if (used == std::string(env).size()) return value;
    } catch (const std::logic_error&) {
    }
    throw ConfigError({{"TOPICS_SIM_SEED", "not an unsigned integer: '" + std::string(env) + "'"}});
  }
  return std::nullopt;
}

void apply_common(Scenario& scenario, const CommonFlags& flags, bool overrides_scale) {
  if (const auto seed = resolve_seed(flags)) scenario.seed_base = *seed;
  if (flags.replications != 1) scenario.replications = flags.replications;
  if (overrides_scale) {
    if (flags.users) scenario.base.num_users = *flags.users;
    if (flags.weeks) scenario.base.num_weeks = *flags.weeks;
  }
  if (!flags.presence_file.empty()) {
    scenario.base.presence = load_presence_file(flags.presence_file, scenario.base.num_ad_networks);
  }
}

unsigned effective_parallelism(unsigned requested) {
  return requested == 0 ? std::max(1U, std::thread::hardware_concurrency()) : requested;
}

int execute(const Scenario& scenario, const CommonFlags& flags) {
  CampaignOptions options;
  options.parallelism = effective_parallelism(flags.parallelism);
  options.record_events = flags.events;
  options.on_run = [](const CampaignRun& run) {
    std::cerr << run.label << " seed=" << run.seed << " fill_rate=" << format_double(run.report.fill_rate) << '\n';
  };
  run_campaign_to_dir(scenario, options, flags.out_dir);
  std::cerr << "wrote " << (std::filesystem::path(flags.out_dir) / "results.csv").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topics API ad-network competition simulator"};
  app.require_subcommand(1);

  CommonFlags flags;

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run one configuration file");
  run_cmd->add_option("--config", config_path, "key = value configuration file")->required();
  add_common(run_cmd, flags);

  std::string scenario_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario file with sweep axes");
  sweep_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
  add_common(sweep_cmd, flags);

  std::string preset_name;
  std::optional<int> percentile;
  bool paper_scale = false;
  bool paper_exact = false;
  auto* preset_cmd = app.add_subcommand("preset", "Run a built-in scenario");
  preset_cmd->add_option("name", preset_name, "theory-1, theory-2 or market")->required();
  preset_cmd->add_option("--percentile", percentile, "Browsing percentile for market: 10, 25, 50, 75, 90");
  preset_cmd->add_flag("--paper-scale", paper_scale, "Market at 10,000 users over 55 weeks");
  preset_cmd->add_flag("--paper-exact", paper_exact, "Median market user at 334 pages per epoch");
  add_common(preset_cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    Scenario scenario;
    if (*run_cmd) {
      scenario.base = load_config_file(config_path);
      scenario.name = std::filesystem::path(config_path).stem().string();
      scenario.seed_base = scenario.base.seed;
      apply_common(scenario, flags, true);
    } else if (*sweep_cmd) {
      scenario = load_scenario_file(scenario_path);
      apply_common(scenario, flags, true);
    } else {
      PresetOptions preset;
      preset.paper_scale = paper_scale;
      preset.paper_exact = paper_exact;
      preset.users = flags.users;
      preset.weeks = flags.weeks;
      try {
        scenario = make_preset(preset_name, percentile, preset);
      } catch (const std::invalid_argument& e) {
        throw ConfigError({{"percentile", std::string(e.what())}});
      }
      apply_common(scenario, flags, false);
    }
    return execute(scenario, flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v.field << ": " << v.message << '\n';
    return kExitConfig;
  } catch (const RunFailure& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kExitRun;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRun;
  }
}
