#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "topics_sim/campaign.hpp"

namespace topics_sim {
namespace {

Scenario small_scenario() {
  Scenario s;
  s.name = "small";
  s.base.num_users = 6;
  s.base.num_websites = 300;
  s.base.num_ad_networks = 5;
  s.base.num_weeks = 6;
  s.base.pages_per_epoch = 20;
  s.base.taxonomy_size = 20;
  s.axes = {{"presence", {"0.05", "0.3"}}, {"interest_proportion", {"0.2", "1"}}};
  s.replications = 3;
  s.seed_base = 40;
  return s;
}

std::string csv_of(const CampaignResult& r) {
  std::ostringstream out;
  write_results_csv(out, r);
  return out.str();
}

TEST(Csv, HeaderIsStable) {
  EXPECT_STREQ(kCsvHeader,
               "scenario,seed,network_id,presence,eligibility_ratio,low_competition_ratio,sole_competitor_ratio,"
               "fill_rate");
  const auto csv = csv_of(run_campaign(small_scenario()));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
}

TEST(Csv, OneRowPerNetworkPerRun) {
  const auto result = run_campaign(small_scenario());
  ASSERT_EQ(result.runs.size(), 4U * 3U);
  const auto csv = csv_of(result);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 12 * 5);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("small;presence=0.05;interest_proportion=0.2,40,0,0.05,", 0), 0U) << line;
}

TEST(Campaign, RerunIsByteIdentical) {
  const auto s = small_scenario();
  EXPECT_EQ(csv_of(run_campaign(s)), csv_of(run_campaign(s)));
}

TEST(Campaign, ParallelismDoesNotChangeResults) {
  const auto s = small_scenario();
  CampaignOptions serial;
  CampaignOptions parallel;
  parallel.parallelism = 4;
  EXPECT_EQ(csv_of(run_campaign(s, serial)), csv_of(run_campaign(s, parallel)));

  auto single = s;
  single.axes.clear();
  single.replications = 1;
  EXPECT_EQ(csv_of(run_campaign(single, serial)), csv_of(run_campaign(single, parallel)));
}

TEST(Campaign, StreamsRunsInOrder) {
  std::vector<std::pair<std::size_t, std::uint64_t>> seen;
  CampaignOptions options;
  options.parallelism = 3;
  options.on_run = [&](const CampaignRun& run) { seen.emplace_back(run.point_index, run.seed); };
  run_campaign(small_scenario(), options);
  ASSERT_EQ(seen.size(), 12U);
  for (std::size_t i = 0; i < seen.size(); ++i) {
    EXPECT_EQ(seen[i].first, i / 3);
    EXPECT_EQ(seen[i].second, 40 + i % 3);
  }
}

TEST(Campaign, RunsCarryTheirSeed) {
  const auto result = run_campaign(small_scenario());
  for (const auto& run : result.runs) {
    EXPECT_EQ(run.config.seed, run.seed);
    EXPECT_EQ(run.report.seed, run.seed);
  }
}

TEST(Campaign, InvalidScenariosAreRejected) {
  auto s = small_scenario();
  s.axes.push_back({"num_sites", {"5"}});
  EXPECT_THROW(run_campaign(s), ConfigError);
  s = small_scenario();
  s.axes.push_back({"seed", {"5"}});
  EXPECT_THROW(validate_scenario(s), ConfigError);
  s = small_scenario();
  s.axes.push_back({"pages_per_epoch", {"20", "301"}});
  EXPECT_THROW(validate_scenario(s), ConfigError);
  s = small_scenario();
  s.replications = 0;
  EXPECT_THROW(validate_scenario(s), ConfigError);
}

TEST(Grid, LastAxisFastest) {
  const auto points = expand_grid(small_scenario());
  ASSERT_EQ(points.size(), 4U);
  EXPECT_EQ(points[1].label, "small;presence=0.05;interest_proportion=1");
  EXPECT_EQ(points[2].label, "small;presence=0.3;interest_proportion=0.2");
  EXPECT_EQ(std::get<double>(points[2].config.presence), 0.3);
  EXPECT_EQ(points[2].config.interest_proportion, 0.2);
}

TEST(Presets, TheoryGrids) {
  const auto t1 = preset_theory_1();
  EXPECT_EQ(expand_grid(t1).size(), 5U * 9U);
  EXPECT_EQ(t1.base.num_users, 100U);
  EXPECT_EQ(t1.base.num_websites, 50'000U);
  EXPECT_EQ(t1.base.num_weeks, 50U);
  EXPECT_EQ(t1.base.pages_per_epoch, 334U);
  EXPECT_EQ(t1.base.user_loyalty, 0.43);
  EXPECT_EQ(t1.base.ads_on_site, 10U);
  EXPECT_EQ(t1.base.max_topics, 3U);
  EXPECT_EQ(t1.base.taxonomy_size, kReproductionTaxonomySize);
  EXPECT_NO_THROW(validate_scenario(t1));

  const auto t2 = preset_theory_2();
  EXPECT_EQ(expand_grid(t2).size(), 10U * 9U);
  EXPECT_EQ(t2.base.num_ad_networks, 50U);
  EXPECT_NO_THROW(validate_scenario(t2));
}

TEST(Presets, MarketPercentiles) {
  const auto p50 = preset_market(50);
  EXPECT_EQ(p50.name, "market-p50");
  EXPECT_EQ(p50.base.pages_per_epoch, 335U);
  EXPECT_EQ(p50.base.user_loyalty, 0.43);
  EXPECT_EQ(p50.base.num_ad_networks, 174U);
  EXPECT_EQ(p50.base.num_users, 500U);
  EXPECT_EQ(p50.base.num_weeks, 20U);
  EXPECT_EQ(std::get<std::vector<double>>(p50.base.presence), synth_market_presence(kMarketShape));
  EXPECT_NO_THROW(validate_scenario(p50));

  PresetOptions exact;
  exact.paper_exact = true;
  exact.paper_scale = true;
  const auto full = preset_market(50, exact);
  EXPECT_EQ(full.base.pages_per_epoch, 334U);
  EXPECT_EQ(full.base.num_users, 10'000U);
  EXPECT_EQ(full.base.num_weeks, 55U);

  const auto p10 = preset_market(10);
  EXPECT_EQ(p10.base.pages_per_epoch, 33U);
  EXPECT_EQ(p10.base.user_loyalty, 0.14);
  EXPECT_EQ(preset_market(10, exact).base.pages_per_epoch, 33U);

  EXPECT_THROW(preset_market(60), std::invalid_argument);
  EXPECT_THROW(make_preset("theory-3", std::nullopt, {}), ConfigError);
  EXPECT_EQ(make_preset("market", 90, {}).base.pages_per_epoch, 1083U);
}

TEST(ScenarioFile, ParsesBaseSweepsAndPercentile) {
  const auto s = parse_scenario(
      "# grid\n"
      "scenario.name = mine\n"
      "scenario.replications = 2\n"
      "scenario.seed_base = 9\n"
      "scenario.percentile = 25\n"
      "num_users = 4\n"
      "sweep.num_ad_networks = 10, 20\n");
  EXPECT_EQ(s.name, "mine");
  EXPECT_EQ(s.replications, 2U);
  EXPECT_EQ(s.seed_base, 9U);
  EXPECT_EQ(s.percentile, 25);
  EXPECT_EQ(s.base.pages_per_epoch, 114U);
  EXPECT_EQ(s.base.user_loyalty, 0.28);
  EXPECT_EQ(s.base.num_users, 4U);
  ASSERT_EQ(s.axes.size(), 1U);
  EXPECT_EQ(s.axes[0].values, (std::vector<std::string>{"10", "20"}));
  EXPECT_THROW(parse_scenario("bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_scenario("scenario.percentile = 60\n"), ConfigError);
  EXPECT_THROW(parse_scenario("scenario.replications = x\n"), ConfigError);
}

TEST(ScenarioFile, PresenceFileRelativeToScenario) {
  const auto dir = std::filesystem::temp_directory_path() / "topics_sim_scenario_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "market.txt") << "0.5\n0.1\n";
  std::ofstream(dir / "s.scenario") << "num_ad_networks = 2\nscenario.presence_file = market.txt\n";
  const auto s = load_scenario_file((dir / "s.scenario").string());
  EXPECT_EQ(std::get<std::vector<double>>(s.base.presence), (std::vector<double>{0.5, 0.1}));
  std::filesystem::remove_all(dir);
}

TEST(Output, DirectoryHasCsvSummaryAndEvents) {
  const auto dir = std::filesystem::temp_directory_path() / "topics_sim_output_test";
  std::filesystem::remove_all(dir);
  auto s = small_scenario();
  s.replications = 2;
  CampaignOptions options;
  options.record_events = true;
  const auto result = run_campaign_to_dir(s, options, dir);

  std::ifstream csv(dir / "results.csv");
  std::stringstream csv_text;
  csv_text << csv.rdbuf();
  EXPECT_EQ(csv_text.str(), csv_of(result));
  EXPECT_FALSE(std::filesystem::exists(dir / "PARTIAL"));
  EXPECT_GT(std::filesystem::file_size(dir / "events.log"), 0U);
  EXPECT_GT(std::filesystem::file_size(dir / "topics.jsonl"), 0U);

  std::ifstream summary_file(dir / "summary.json");
  const auto summary = nlohmann::json::parse(summary_file);
  EXPECT_EQ(summary["scenario"], "small");
  ASSERT_EQ(summary["points"].size(), 4U);
  const auto& point = summary["points"][0];
  EXPECT_EQ(point["config"]["num_users"], 6);
  ASSERT_EQ(point["runs"].size(), 2U);
  const double f0 = point["runs"][0]["fill_rate"], f1 = point["runs"][1]["fill_rate"];
  EXPECT_DOUBLE_EQ(point["mean_fill_rate"].get<double>(), (f0 + f1) / 2);
  EXPECT_DOUBLE_EQ(point["mean_vacancy"].get<double>(), 1.0 - (f0 + f1) / 2);
  EXPECT_TRUE(point["mean_spearman"].contains("sole_competitor"));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace topics_sim
