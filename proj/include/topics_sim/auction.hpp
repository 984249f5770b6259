#pragma once

#include <optional>
#include <span>
#include <vector>

#include "topics_sim/core_model.hpp"
#include "topics_sim/event_log.hpp"
#include "topics_sim/metrics.hpp"
#include "topics_sim/rng.hpp"
#include "topics_sim/topics_engine.hpp"
#include "topics_sim/world.hpp"

namespace topics_sim {

struct PageVisitOutcome {
  SiteId site_id = 0;
  std::vector<NetworkId> present;
  std::vector<NetworkId> eligible;
  // One entry per ad space; nullopt marks a space no network could target.
  std::vector<std::optional<NetworkId>> winners;
};

// Networks on `site` that receive at least one topic they target. Computed
// once per page view. When `returned` is given it receives, for every present
// network, the topics the API handed it.
std::vector<NetworkId> determine_eligibility(const World& world, const Website& site, UserTopicsState& user,
                                             Epoch epoch, RngStream& sticky_rng,
                                             std::vector<CallerTopics>* returned = nullptr,
                                             std::vector<StickyDraw>* new_draws = nullptr);

// Uniform choice among `eligible`, nullopt if it is empty.
std::optional<NetworkId> pick_winner(std::span<const NetworkId> eligible, RngStream& rng);

struct PageRandomness {
  RngStream& sticky;
  RngStream& winner;
};

// One page view: observations, then eligibility, then one winner draw per ad
// space, then counters (only when `counted`). Appends a trace record to `log`
// when given.
PageVisitOutcome simulate_page_visit(const World& world, UserTopicsState& user, SiteId site, Epoch epoch,
                                     bool counted, ScenarioCounters& counters, PageRandomness rng,
                                     EventLog* log = nullptr);

// Adds one page's outcome to the counters.
void count_page(const PageVisitOutcome& outcome, ScenarioCounters& counters);

}  // namespace topics_sim
