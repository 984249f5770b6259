#include "topics_sim/campaign.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "topics_sim/sim_runner.hpp"

namespace topics_sim {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::vector<std::string> kPresenceGrid = {"0.01", "0.02", "0.05", "0.1", "0.2", "0.4", "0.6", "0.8", "1"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  for (;;) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

void apply_percentile(Scenario& scenario, int percentile) {
  const auto& profile = percentile_profile(percentile);
  scenario.base.pages_per_epoch = profile.pages_per_epoch;
  scenario.base.user_loyalty = profile.loyalty;
  scenario.percentile = percentile;
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& values) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json config_json(const SimConfig& cfg) {
  ordered_json j;
  j["num_users"] = cfg.num_users;
  j["num_websites"] = cfg.num_websites;
  j["num_ad_networks"] = cfg.num_ad_networks;
  j["num_weeks"] = cfg.num_weeks;
  j["pages_per_epoch"] = cfg.pages_per_epoch;
  j["user_loyalty"] = cfg.user_loyalty;
  j["ads_on_site"] = cfg.ads_on_site;
  j["max_topics"] = cfg.max_topics;
  if (const auto* uniform = std::get_if<double>(&cfg.presence)) {
    j["presence"] = *uniform;
  } else {
    j["presence"] = std::get<std::vector<double>>(cfg.presence);
  }
  j["interest_proportion"] = cfg.interest_proportion;
  j["taxonomy_size"] = cfg.taxonomy_size;
  j["seed"] = cfg.seed;
  j["warmup_epochs"] = cfg.warmup_epochs;
  j["topic_window"] = cfg.topic_window;
  j["top_n_topics"] = cfg.top_n_topics;
  return j;
}

}  // namespace

void validate_scenario(const Scenario& scenario) {
  std::vector<ConfigViolation> violations;
  if (scenario.name.empty()) violations.push_back({"scenario.name", "must not be empty"});
  if (scenario.replications == 0) violations.push_back({"scenario.replications", "must be positive"});
  for (const auto& axis : scenario.axes) {
    if (!is_config_key(axis.key) || axis.key == "seed") {
      violations.push_back({"sweep." + axis.key, "is not a sweepable configuration field"});
    } else if (axis.values.empty()) {
      violations.push_back({"sweep." + axis.key, "has no values"});
    }
  }
  if (!violations.empty()) throw ConfigError(std::move(violations));

  for (const auto& point : expand_grid(scenario)) {
    auto found = check_config(point.config);
    for (auto& v : found) {
      v.message += " (at " + point.label + ")";
      violations.push_back(std::move(v));
    }
  }
  if (!violations.empty()) throw ConfigError(std::move(violations));
}

std::vector<ConfigPoint> expand_grid(const Scenario& scenario) {
  std::vector<ConfigPoint> points{{scenario.name, {}, scenario.base}};
  for (const auto& axis : scenario.axes) {
    std::vector<ConfigPoint> next;
    next.reserve(points.size() * axis.values.size());
    for (const auto& point : points) {
      for (const auto& value : axis.values) {
        auto p = point;
        apply_config_value(p.config, axis.key, value);
        p.assignments.emplace_back(axis.key, value);
        p.label += ";" + axis.key + "=" + value;
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  }
  return points;
}

SimConfig theory_base_config() {
  SimConfig cfg;
  cfg.num_users = 100;
  cfg.num_websites = 50'000;
  cfg.num_ad_networks = 50;
  cfg.num_weeks = 50;
  cfg.pages_per_epoch = 334;
  cfg.user_loyalty = 0.43;
  cfg.ads_on_site = 10;
  cfg.max_topics = 3;
  cfg.presence = 0.8;
  cfg.interest_proportion = 1.0;
  cfg.taxonomy_size = kReproductionTaxonomySize;
  return cfg;
}

namespace {

Scenario theory_scenario(std::string name, const PresetOptions& options) {
  Scenario s;
  s.name = std::move(name);
  s.base = theory_base_config();
  if (options.users) s.base.num_users = *options.users;
  if (options.weeks) s.base.num_weeks = *options.weeks;
  s.replications = options.replications;
  s.seed_base = options.seed_base;
  return s;
}

}  // namespace

Scenario preset_theory_1(const PresetOptions& options) {
  auto s = theory_scenario("theory-1", options);
  s.axes = {{"num_ad_networks", {"10", "25", "50", "100", "200"}}, {"presence", kPresenceGrid}};
  return s;
}

Scenario preset_theory_2(const PresetOptions& options) {
  auto s = theory_scenario("theory-2", options);
  s.base.num_ad_networks = 50;
  s.axes = {{"interest_proportion", {"0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9", "1"}},
            {"presence", kPresenceGrid}};
  return s;
}

Scenario preset_market(int percentile, const PresetOptions& options) {
  Scenario s;
  s.name = "market-p" + std::to_string(percentile);
  s.base = theory_base_config();
  apply_percentile(s, percentile);
  if (options.paper_exact && percentile == 50) s.base.pages_per_epoch = 334;
  s.base.num_users = options.users.value_or(options.paper_scale ? 10'000 : 500);
  s.base.num_weeks = options.weeks.value_or(options.paper_scale ? 55 : 20);
  s.base.num_ad_networks = kMarketShape.count;
  s.base.presence = synth_market_presence(kMarketShape);
  s.base.interest_proportion = 1.0;
  s.replications = options.replications;
  s.seed_base = options.seed_base;
  return s;
}

Scenario make_preset(const std::string& name, std::optional<int> percentile, const PresetOptions& options) {
  if (name == "theory-1") return preset_theory_1(options);
  if (name == "theory-2") return preset_theory_2(options);
  if (name == "market") return preset_market(percentile.value_or(50), options);
  throw ConfigError({{"preset", "unknown preset '" + name + "' (expected theory-1, theory-2 or market)"}});
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  Scenario s;
  s.name = "scenario";
  std::optional<int> percentile;
  std::optional<std::string> presence_file;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError({{"line " + std::to_string(line_no), "expected 'key = value'"}});
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      if (key == "scenario.name") {
        s.name = std::string(value);
      } else if (key == "scenario.replications") {
        s.replications = static_cast<std::uint32_t>(std::stoul(std::string(value)));
      } else if (key == "scenario.seed_base") {
        s.seed_base = std::stoull(std::string(value));
      } else if (key == "scenario.percentile") {
        percentile = std::stoi(std::string(value));
      } else if (key == "scenario.presence_file") {
        presence_file = std::string(value);
      } else if (key.starts_with("sweep.")) {
        s.axes.push_back({std::string(key.substr(6)), split_list(value)});
      } else {
        apply_config_value(s.base, key, value);
      }
    } catch (const std::logic_error&) {
      throw ConfigError({{std::string(key), "cannot parse '" + std::string(value) + "'"}});
    }
  }
  if (percentile) {
    try {
      apply_percentile(s, *percentile);
    } catch (const std::invalid_argument& e) {
      throw ConfigError({{"scenario.percentile", std::string(e.what())}});
    }
  }
  if (presence_file) {
    std::filesystem::path path(*presence_file);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    s.base.presence = load_presence_file(path.string(), s.base.num_ad_networks);
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{"scenario", "cannot open '" + path + "'"}});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), std::filesystem::path(path).parent_path());
}

CampaignResult run_campaign(const Scenario& scenario, const CampaignOptions& options) {
  validate_scenario(scenario);
  CampaignResult result;
  result.scenario = scenario;
  result.points = expand_grid(scenario);

  struct Task {
    std::size_t point;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < result.points.size(); ++p) {
    for (std::uint32_t r = 0; r < scenario.replications; ++r) tasks.push_back({p, scenario.seed_base + r});
  }

  const unsigned parallelism = std::max(1U, options.parallelism);
  const unsigned campaign_workers = std::min<unsigned>(parallelism, static_cast<unsigned>(tasks.size()));
  RunOptions run_options;
  run_options.workers = campaign_workers > 1 ? 1 : parallelism;
  run_options.record_events = options.record_events;

  std::vector<std::optional<CampaignRun>> done(tasks.size());
  std::size_t next_to_emit = 0;
  std::mutex sink_mutex;
  std::atomic<std::size_t> next_task{0};
  std::optional<std::string> failure;

  auto work = [&] {
    for (std::size_t t = next_task++; t < tasks.size(); t = next_task++) {
      CampaignRun run;
      run.point_index = tasks[t].point;
      run.label = result.points[tasks[t].point].label;
      run.seed = tasks[t].seed;
      run.config = result.points[tasks[t].point].config;
      run.config.seed = run.seed;
      try {
        auto outcome = run_simulation(run.config, run_options);
        run.report = std::move(outcome.report);
        run.report.label = run.label;
        run.events = std::move(outcome.events);
      } catch (const std::exception& e) {
        std::lock_guard lock(sink_mutex);
        if (!failure) failure = run.label + " seed " + std::to_string(run.seed) + ": " + e.what();
        next_task = tasks.size();
        return;
      }
      std::lock_guard lock(sink_mutex);
      done[t] = std::move(run);
      while (next_to_emit < done.size() && done[next_to_emit] && !failure) {
        if (options.on_run) options.on_run(*done[next_to_emit]);
        ++next_to_emit;
      }
    }
  };

  if (campaign_workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < campaign_workers; ++w) pool.emplace_back(work);
  }
  if (failure) throw RunFailure(*failure);

  result.runs.reserve(done.size());
  for (auto& r : done) result.runs.push_back(std::move(*r));
  return result;
}

void write_csv_rows(std::ostream& out, const CampaignRun& run) {
  const auto fill = format_double(run.report.fill_rate);
  for (const auto& n : run.report.per_network) {
    out << run.label << ',' << run.seed << ',' << n.network_id << ',' << format_double(n.presence) << ','
        << format_double(n.eligibility_ratio) << ',' << format_double(n.low_competition_ratio) << ','
        << format_double(n.sole_competitor_ratio) << ',' << fill << '\n';
  }
}

void write_results_csv(std::ostream& out, const CampaignResult& result) {
  out << kCsvHeader << '\n';
  for (const auto& run : result.runs) write_csv_rows(out, run);
}

void write_summary_json(std::ostream& out, const CampaignResult& result) {
  ordered_json j;
  j["scenario"] = result.scenario.name;
  j["percentile"] = result.scenario.percentile ? ordered_json(*result.scenario.percentile) : ordered_json(nullptr);
  j["replications"] = result.scenario.replications;
  j["seed_base"] = result.scenario.seed_base;
  auto points = ordered_json::array();
  for (std::size_t p = 0; p < result.points.size(); ++p) {
    const auto& point = result.points[p];
    ordered_json pj;
    pj["label"] = point.label;
    auto assignments = ordered_json::object();
    for (const auto& [k, v] : point.assignments) assignments[k] = v;
    pj["assignments"] = std::move(assignments);
    pj["config"] = config_json(point.config);

    std::vector<std::optional<double>> fills, elig, low, sole;
    auto runs = ordered_json::array();
    for (const auto& run : result.runs) {
      if (run.point_index != p) continue;
      const auto& rep = run.report;
      std::size_t absent = 0;
      for (const auto& n : rep.per_network) absent += n.no_presence ? 1 : 0;
      runs.push_back({{"seed", run.seed},
                      {"config_hash", rep.config_hash},
                      {"fill_rate", rep.fill_rate},
                      {"vacancy", 1.0 - rep.fill_rate},
                      {"spearman",
                       {{"eligibility", optional_number(rep.spearman.eligibility)},
                        {"low_competition", optional_number(rep.spearman.low_competition)},
                        {"sole_competitor", optional_number(rep.spearman.sole_competitor)}}},
                      {"networks_without_presence", absent}});
      fills.emplace_back(rep.fill_rate);
      elig.push_back(rep.spearman.eligibility);
      low.push_back(rep.spearman.low_competition);
      sole.push_back(rep.spearman.sole_competitor);
    }
    pj["runs"] = std::move(runs);
    const auto mean_fill = mean_of(fills);
    pj["mean_fill_rate"] = optional_number(mean_fill);
    pj["mean_vacancy"] = mean_fill ? ordered_json(1.0 - *mean_fill) : ordered_json(nullptr);
    pj["mean_spearman"] = {{"eligibility", optional_number(mean_of(elig))},
                           {"low_competition", optional_number(mean_of(low))},
                           {"sole_competitor", optional_number(mean_of(sole))}};
    points.push_back(std::move(pj));
  }
  j["points"] = std::move(points);
  out << j.dump(2) << '\n';
}

CampaignResult run_campaign_to_dir(const Scenario& scenario, const CampaignOptions& options,
                                   const std::filesystem::path& out_dir) {
  validate_scenario(scenario);
  std::filesystem::create_directories(out_dir);
  const auto marker = out_dir / "PARTIAL";
  std::filesystem::remove(marker);

  std::ofstream csv(out_dir / "results.csv", std::ios::binary | std::ios::trunc);
  if (!csv) throw RunFailure("cannot write " + (out_dir / "results.csv").string());
  csv << kCsvHeader << '\n';

  auto streaming = options;
  streaming.on_run = [&](const CampaignRun& run) {
    write_csv_rows(csv, run);
    csv.flush();
    if (options.on_run) options.on_run(run);
  };

  CampaignResult result;
  try {
    result = run_campaign(scenario, streaming);
  } catch (const RunFailure& e) {
    std::ofstream(marker) << e.what() << '\n';
    throw;
  }

  std::ofstream summary(out_dir / "summary.json", std::ios::binary | std::ios::trunc);
  write_summary_json(summary, result);

  if (options.record_events) {
    std::ofstream events(out_dir / "events.log", std::ios::binary | std::ios::trunc);
    std::ofstream topics(out_dir / "topics.jsonl", std::ios::binary | std::ios::trunc);
    for (const auto& run : result.runs) {
      if (!run.events) continue;
      write_event_log(events, *run.events);
      write_topics_dump(topics, *run.events);
    }
  }
  return result;
}

}  // namespace topics_sim
