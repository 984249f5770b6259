#pragma once

#include <span>
#include <vector>

#include "topics_sim/core_model.hpp"
#include "topics_sim/rng.hpp"

namespace topics_sim {

// Everything a user has browsed so far.
class UserHistory {
 public:
  UserHistory(UserId user, std::uint32_t num_websites);

  UserId user_id() const { return user_; }
  // Sites in first-visit order.
  const std::vector<SiteId>& visited_ever() const { return visited_ever_; }
  const std::vector<SiteId>& last_epoch_visits() const { return last_epoch_visits_; }
  bool visited(SiteId site) const { return visited_mask_[site]; }
  std::uint32_t num_websites() const { return static_cast<std::uint32_t>(visited_mask_.size()); }

  // Appends one epoch's visits.
  void commit_epoch(std::span<const SiteId> visits);

 private:
  UserId user_;
  std::vector<SiteId> visited_ever_;
  std::vector<bool> visited_mask_;
  std::vector<SiteId> last_epoch_visits_;
};

// Number of revisits an epoch aims for: round(user_loyalty * pages_per_epoch).
std::uint32_t planned_revisits(const SimConfig& cfg);

// One epoch of distinct site visits, pages_per_epoch long. Revisits are drawn
// from the full history, the rest from never-visited sites. When the
// never-visited pool runs dry the remainder comes from history sites not yet
// picked this epoch. Revisits come first in the returned order.
std::vector<SiteId> generate_epoch_visits(const UserHistory& history, const SimConfig& cfg, Epoch epoch,
                                          RngStream& rng);

}  // namespace topics_sim
