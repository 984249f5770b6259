#pragma once

#include <initializer_list>
#include <vector>

#include "topics_sim/core_model.hpp"
#include "topics_sim/world.hpp"

namespace topics_sim::testing {

inline Website make_site(SiteId id, std::initializer_list<std::uint32_t> topics,
                         std::initializer_list<NetworkId> networks, std::uint32_t ad_spaces = 10) {
  Website w;
  w.site_id = id;
  for (auto t : topics) w.topics.emplace_back(t);
  w.networks_present = networks;
  w.ad_spaces = ad_spaces;
  return w;
}

inline AdNetwork make_network(NetworkId id, double presence, const std::vector<std::uint32_t>& interest,
                              std::uint32_t taxonomy_size) {
  AdNetwork n;
  n.network_id = id;
  n.presence = presence;
  std::vector<TopicId> topics;
  for (auto t : interest) topics.emplace_back(t);
  n.set_interest(std::move(topics), taxonomy_size);
  return n;
}

inline std::vector<std::uint32_t> all_topics(std::uint32_t taxonomy_size) {
  std::vector<std::uint32_t> out(taxonomy_size);
  for (std::uint32_t t = 0; t < taxonomy_size; ++t) out[t] = t;
  return out;
}

// Small valid config for hand-built worlds.
inline SimConfig tiny_config(std::uint32_t taxonomy_size = 8) {
  SimConfig cfg;
  cfg.num_users = 1;
  cfg.num_websites = 10;
  cfg.num_ad_networks = 2;
  cfg.num_weeks = 8;
  cfg.pages_per_epoch = 3;
  cfg.taxonomy_size = taxonomy_size;
  return cfg;
}

}  // namespace topics_sim::testing
