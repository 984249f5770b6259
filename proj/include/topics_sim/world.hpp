#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topics_sim/core_model.hpp"

namespace topics_sim {

// Immutable universe of a run: websites with topic labels and network
// placements, and ad networks with their interest sets.
class World {
 public:
  World(std::vector<Website> websites, std::vector<AdNetwork> networks, std::uint32_t taxonomy_size);

  const std::vector<Website>& websites() const { return websites_; }
  const std::vector<AdNetwork>& networks() const { return networks_; }
  const Website& site(SiteId id) const { return websites_.at(id); }
  const AdNetwork& network(NetworkId id) const { return networks_.at(id); }
  std::uint32_t taxonomy_size() const { return taxonomy_size_; }

  friend bool operator==(const World& a, const World& b);

 private:
  std::vector<Website> websites_;
  std::vector<AdNetwork> networks_;
  std::uint32_t taxonomy_size_;
};

// Draws the world for a validated config. Site topic counts are uniform on
// {1..max_topics}, topics and interest sets are uniform without replacement,
// and each (site, network) placement is an independent Bernoulli trial with
// the network's presence.
World generate_world(const SimConfig& cfg);

// Same, with the per-network presence list replaced by `presence`. The number
// of networks is presence.size(), which may be zero.
World generate_world(const SimConfig& cfg, std::span<const double> presence);

struct MarketShape {
  std::uint32_t count = 174;
  double head = 0.5924;
  double alpha = 1.8;
  double floor = 0.0001;
};

// Synthetic market-share presence list: entry i (0-based) is
// max(floor, head * (i + 1)^-alpha), so entry 0 is the dominant network.
// Throws std::invalid_argument unless count >= 1, 0 < floor <= head <= 1 and
// alpha > 0.
std::vector<double> synth_market_presence(const MarketShape& shape);

// One fraction per line; blank lines and '#' comments are skipped. Throws
// ConfigError if a value is malformed or out of (0, 1], or if
// `expected_count` is given and does not match.
std::vector<double> load_presence_file(const std::string& path, std::optional<std::uint32_t> expected_count = {});

}  // namespace topics_sim
