#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "topics_sim/campaign.hpp"
#include "topics_sim/world.hpp"

namespace topics_sim {
namespace {

SimConfig small_world_config() {
  SimConfig cfg;
  cfg.num_websites = 2000;
  cfg.num_ad_networks = 6;
  cfg.taxonomy_size = 40;
  cfg.pages_per_epoch = 20;
  return cfg;
}

std::size_t sites_with(const World& w, NetworkId n) {
  std::size_t count = 0;
  for (const auto& s : w.websites()) {
    count += std::binary_search(s.networks_present.begin(), s.networks_present.end(), n) ? 1 : 0;
  }
  return count;
}

TEST(World, SameSeedSameWorld) {
  const auto cfg = small_world_config();
  EXPECT_EQ(generate_world(cfg), generate_world(cfg));
  auto other = cfg;
  other.seed = 2;
  EXPECT_FALSE(generate_world(cfg) == generate_world(other));
}

TEST(World, HalfPresenceWithinThreeSigma) {
  SimConfig cfg;
  cfg.num_websites = 10'000;
  cfg.num_ad_networks = 1;
  cfg.presence = 0.5;
  cfg.seed = 11;
  const auto world = generate_world(cfg);
  const double sigma = std::sqrt(10'000 * 0.5 * 0.5);
  EXPECT_EQ(sigma, 50.0);
  EXPECT_NEAR(static_cast<double>(sites_with(world, 0)), 5000.0, 3 * sigma);
}

TEST(World, PresenceWithinFourSigmaAcrossSeeds) {
  const std::vector<double> presence = {0.01, 0.02, 0.1, 0.3, 0.5, 0.8, 1.0};
  SimConfig cfg;
  cfg.num_websites = 5000;
  cfg.num_ad_networks = static_cast<std::uint32_t>(presence.size());
  cfg.presence = presence;
  cfg.taxonomy_size = 30;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    cfg.seed = seed;
    const auto world = generate_world(cfg);
    for (NetworkId n = 0; n < presence.size(); ++n) {
      const double mean = presence[n] * cfg.num_websites;
      const double sigma = std::sqrt(mean * (1.0 - presence[n]));
      EXPECT_LE(std::abs(static_cast<double>(sites_with(world, n)) - mean), 4 * sigma + 1e-9)
          << "seed " << seed << " network " << n;
    }
  }
}

TEST(World, EmptyPresenceListMeansNoNetworks) {
  const auto cfg = small_world_config();
  const auto world = generate_world(cfg, std::span<const double>{});
  EXPECT_TRUE(world.networks().empty());
  for (const auto& s : world.websites()) EXPECT_TRUE(s.networks_present.empty());
}

TEST(World, SingleTopicSites) {
  auto cfg = small_world_config();
  cfg.max_topics = 1;
  const auto world = generate_world(cfg);
  for (const auto& s : world.websites()) EXPECT_EQ(s.topics.size(), 1U);
}

TEST(World, SiteShape) {
  auto cfg = small_world_config();
  cfg.max_topics = 3;
  cfg.ads_on_site = 7;
  std::array<int, 4> by_count{};
  const auto world = generate_world(cfg);
  ASSERT_EQ(world.websites().size(), cfg.num_websites);
  for (SiteId i = 0; i < world.websites().size(); ++i) {
    const auto& s = world.websites()[i];
    EXPECT_EQ(s.site_id, i);
    EXPECT_EQ(s.ad_spaces, 7U);
    ASSERT_GE(s.topics.size(), 1U);
    ASSERT_LE(s.topics.size(), 3U);
    by_count[s.topics.size()] += 1;
    EXPECT_TRUE(std::is_sorted(s.topics.begin(), s.topics.end()));
    EXPECT_EQ(std::adjacent_find(s.topics.begin(), s.topics.end()), s.topics.end());
    for (auto t : s.topics) EXPECT_LT(t.value, cfg.taxonomy_size);
    EXPECT_TRUE(std::is_sorted(s.networks_present.begin(), s.networks_present.end()));
  }
  for (int k = 1; k <= 3; ++k) EXPECT_NEAR(by_count[k], 2000 / 3.0, 120);
}

TEST(World, InterestSetsHaveExactSize) {
  auto cfg = small_world_config();
  for (double ip : {0.1, 0.25, 0.5, 1.0}) {
    cfg.interest_proportion = ip;
    const auto world = generate_world(cfg);
    for (const auto& n : world.networks()) {
      EXPECT_EQ(n.interest_topics.size(), interest_set_size(cfg));
      EXPECT_TRUE(std::is_sorted(n.interest_topics.begin(), n.interest_topics.end()));
      EXPECT_EQ(std::adjacent_find(n.interest_topics.begin(), n.interest_topics.end()), n.interest_topics.end());
      for (std::uint32_t t = 0; t < cfg.taxonomy_size; ++t) {
        EXPECT_EQ(n.targets(TopicId(t)),
                  std::binary_search(n.interest_topics.begin(), n.interest_topics.end(), TopicId(t)));
      }
    }
  }
}

TEST(World, InterestSetsDifferAcrossNetworks) {
  auto cfg = small_world_config();
  cfg.interest_proportion = 0.25;
  const auto world = generate_world(cfg);
  std::set<std::vector<TopicId>> distinct;
  for (const auto& n : world.networks()) distinct.insert(n.interest_topics);
  EXPECT_GT(distinct.size(), 1U);
}

TEST(SynthMarket, SingleNetworkIsTheHead) {
  EXPECT_EQ(synth_market_presence({1, 0.5924, 1.8, 0.0001}), std::vector<double>{0.5924});
}

TEST(SynthMarket, FloorClampsASteepTail) {
  EXPECT_EQ(synth_market_presence({3, 0.5, 60.0, 0.0001}), (std::vector<double>{0.5, 0.0001, 0.0001}));
}

TEST(SynthMarket, DefaultShapeMostlySmallNetworks) {
  const auto p = synth_market_presence({174, 0.5924, 1.8, 0.0001});
  std::size_t oracle_small = 0;
  for (int i = 1; i <= 174; ++i) oracle_small += std::max(0.0001, 0.5924 * std::pow(i, -1.8)) < 0.0003 ? 1 : 0;
  const auto small = std::count_if(p.begin(), p.end(), [](double x) { return x < 0.0003; });
  EXPECT_EQ(static_cast<std::size_t>(small), oracle_small);
  EXPECT_GE(static_cast<double>(small) / 174.0, 0.60);
  EXPECT_TRUE(std::is_sorted(p.rbegin(), p.rend()));
}

TEST(SynthMarket, ReproductionShapeHasSeventySevenPercentTail) {
  const auto p = synth_market_presence(kMarketShape);
  const auto small = std::count_if(p.begin(), p.end(), [](double x) { return x < 0.0003; });
  EXPECT_EQ(small, 134);
  EXPECT_NEAR(static_cast<double>(small) / 174.0, 0.77, 0.005);
  EXPECT_DOUBLE_EQ(p.front(), 0.5924);
}

TEST(SynthMarket, RejectsBadShapes) {
  EXPECT_THROW(synth_market_presence({3, 0.0, 1.8, 0.0001}), std::invalid_argument);
  EXPECT_THROW(synth_market_presence({3, 0.5, -1.0, 0.0001}), std::invalid_argument);
  EXPECT_THROW(synth_market_presence({3, 0.5, 1.8, 0.0}), std::invalid_argument);
}

TEST(PresenceFile, LoadsAndChecksLength) {
  const auto path = std::filesystem::temp_directory_path() / "topics_sim_presence_test.txt";
  std::ofstream(path) << "# market\n0.5\n0.25\n\n0.001\n";
  EXPECT_EQ(load_presence_file(path.string()), (std::vector<double>{0.5, 0.25, 0.001}));
  EXPECT_THROW(load_presence_file(path.string(), 4), ConfigError);
  std::ofstream(path) << "0.5\n1.5\n";
  EXPECT_THROW(load_presence_file(path.string()), ConfigError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_presence_file(path.string()), ConfigError);
}

}  // namespace
}  // namespace topics_sim
