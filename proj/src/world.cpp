#include "topics_sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "topics_sim/rng.hpp"

namespace topics_sim {

World::World(std::vector<Website> websites, std::vector<AdNetwork> networks, std::uint32_t taxonomy_size)
    : websites_(std::move(websites)), networks_(std::move(networks)), taxonomy_size_(taxonomy_size) {}

bool operator==(const World& a, const World& b) {
  if (a.taxonomy_size_ != b.taxonomy_size_ || a.websites_.size() != b.websites_.size() ||
      a.networks_.size() != b.networks_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.websites_.size(); ++i) {
    const auto& x = a.websites_[i];
    const auto& y = b.websites_[i];
    if (x.site_id != y.site_id || x.topics != y.topics || x.networks_present != y.networks_present ||
        x.ad_spaces != y.ad_spaces) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.networks_.size(); ++i) {
    const auto& x = a.networks_[i];
    const auto& y = b.networks_[i];
    if (x.network_id != y.network_id || x.presence != y.presence || x.interest_topics != y.interest_topics) {
      return false;
    }
  }
  return true;
}

World generate_world(const SimConfig& cfg) {
  std::vector<double> presence(cfg.num_ad_networks);
  for (NetworkId n = 0; n < cfg.num_ad_networks; ++n) presence[n] = cfg.presence_of(n);
  return generate_world(cfg, presence);
}

World generate_world(const SimConfig& cfg, std::span<const double> presence) {
  const std::uint32_t taxonomy = cfg.taxonomy_size;

  std::vector<Website> websites(cfg.num_websites);
  auto topic_rng = derive_stream(cfg.seed, {StreamPurpose::kWorldTopics});
  for (SiteId s = 0; s < cfg.num_websites; ++s) {
    auto& site = websites[s];
    site.site_id = s;
    site.ad_spaces = cfg.ads_on_site;
    const auto count = 1 + static_cast<std::uint32_t>(topic_rng.uniform_index(cfg.max_topics));
    for (auto t : topic_rng.sample_without_replacement(taxonomy, count)) site.topics.emplace_back(t);
    std::sort(site.topics.begin(), site.topics.end());
  }

  const auto interest_size = interest_set_size(cfg);
  std::vector<AdNetwork> networks(presence.size());
  for (NetworkId n = 0; n < presence.size(); ++n) {
    auto& net = networks[n];
    net.network_id = n;
    net.presence = presence[n];

    auto placement_rng = derive_stream(cfg.seed, {StreamPurpose::kWorldPlacement, n});
    for (auto& site : websites) {
      if (placement_rng.bernoulli(net.presence)) site.networks_present.push_back(n);
    }

    auto interest_rng = derive_stream(cfg.seed, {StreamPurpose::kWorldInterest, n});
    std::vector<TopicId> interest;
    for (auto t : interest_rng.sample_without_replacement(taxonomy, interest_size)) interest.emplace_back(t);
    net.set_interest(std::move(interest), taxonomy);
  }

  return World(std::move(websites), std::move(networks), taxonomy);
}

std::vector<double> synth_market_presence(const MarketShape& shape) {
  if (shape.count < 1) throw std::invalid_argument("market size must be at least 1");
  if (!(shape.floor > 0.0 && shape.floor <= shape.head && shape.head <= 1.0)) {
    throw std::invalid_argument("market shape requires 0 < floor <= head <= 1");
  }
  if (!(shape.alpha > 0.0) || !std::isfinite(shape.alpha)) {
    throw std::invalid_argument("market shape requires a positive finite alpha");
  }
  std::vector<double> out(shape.count);
  for (std::uint32_t i = 0; i < shape.count; ++i) {
    out[i] = std::max(shape.floor, shape.head * std::pow(static_cast<double>(i + 1), -shape.alpha));
  }
  return out;
}

std::vector<double> load_presence_file(const std::string& path, std::optional<std::uint32_t> expected_count) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{"presence", "cannot open presence file '" + path + "'"}});
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    SimConfig scratch;
    try {
      apply_config_value(scratch, "presence", line);
    } catch (const ConfigError&) {
      throw ConfigError({{"presence", path + ":" + std::to_string(line_no) + ": not a number"}});
    }
    const auto* value = std::get_if<double>(&scratch.presence);
    if (value == nullptr || !(*value > 0.0 && *value <= 1.0)) {
      throw ConfigError({{"presence", path + ":" + std::to_string(line_no) + ": expected one fraction in (0, 1]"}});
    }
    out.push_back(*value);
  }
  if (expected_count && out.size() != *expected_count) {
    throw ConfigError({{"presence", "presence file has " + std::to_string(out.size()) + " entries, expected " +
                                        std::to_string(*expected_count)}});
  }
  return out;
}

}  // namespace topics_sim
