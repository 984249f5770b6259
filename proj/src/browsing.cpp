#include "topics_sim/browsing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace topics_sim {

UserHistory::UserHistory(UserId user, std::uint32_t num_websites) : user_(user), visited_mask_(num_websites, false) {}

void UserHistory::commit_epoch(std::span<const SiteId> visits) {
  last_epoch_visits_.assign(visits.begin(), visits.end());
  for (SiteId s : visits) {
    if (!visited_mask_.at(s)) {
      visited_mask_[s] = true;
      visited_ever_.push_back(s);
    }
  }
}

std::uint32_t planned_revisits(const SimConfig& cfg) {
  return static_cast<std::uint32_t>(std::llround(cfg.user_loyalty * cfg.pages_per_epoch));
}

std::vector<SiteId> generate_epoch_visits(const UserHistory& history, const SimConfig& cfg, Epoch epoch,
                                          RngStream& rng) {
  const std::uint32_t pages = cfg.pages_per_epoch;
  const std::uint32_t num_sites = history.num_websites();
  if (pages > num_sites) throw std::invalid_argument("pages_per_epoch exceeds the number of websites");

  const auto& ever = history.visited_ever();
  std::vector<SiteId> visits;
  visits.reserve(pages);

  std::uint32_t revisits = 0;
  if (epoch > 1 && !ever.empty()) {
    revisits = std::min<std::uint32_t>(planned_revisits(cfg), static_cast<std::uint32_t>(ever.size()));
  }
  std::unordered_set<SiteId> picked;
  picked.reserve(pages * 2);
  for (auto idx : rng.sample_without_replacement(static_cast<std::uint32_t>(ever.size()), revisits)) {
    visits.push_back(ever[idx]);
    picked.insert(ever[idx]);
  }

  const std::uint32_t fresh_needed = pages - revisits;
  const auto never_visited = num_sites - static_cast<std::uint32_t>(ever.size());

  if (fresh_needed <= never_visited / 2) {
    // At least half of all draws land in the pool, so rejection is cheap.
    while (visits.size() < pages) {
      const auto s = static_cast<SiteId>(rng.uniform_index(num_sites));
      if (!history.visited(s) && picked.insert(s).second) visits.push_back(s);
    }
    return visits;
  }

  std::vector<SiteId> pool;
  pool.reserve(never_visited);
  for (SiteId s = 0; s < num_sites; ++s) {
    if (!history.visited(s)) pool.push_back(s);
  }
  const auto take = std::min<std::uint32_t>(fresh_needed, static_cast<std::uint32_t>(pool.size()));
  for (auto idx : rng.sample_without_replacement(static_cast<std::uint32_t>(pool.size()), take)) {
    visits.push_back(pool[idx]);
  }

  if (visits.size() < pages) {
    // Never-visited pool exhausted: top up from history sites not picked yet.
    std::vector<SiteId> fallback;
    for (SiteId s : ever) {
      if (!picked.contains(s)) fallback.push_back(s);
    }
    const auto extra = pages - static_cast<std::uint32_t>(visits.size());
    for (auto idx : rng.sample_without_replacement(static_cast<std::uint32_t>(fallback.size()), extra)) {
      visits.push_back(fallback[idx]);
    }
  }
  return visits;
}

}  // namespace topics_sim
