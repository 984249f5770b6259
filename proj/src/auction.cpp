#include "topics_sim/auction.hpp"

#include <algorithm>

namespace topics_sim {

std::vector<NetworkId> determine_eligibility(const World& world, const Website& site, UserTopicsState& user,
                                             Epoch epoch, RngStream& sticky_rng,
                                             std::vector<CallerTopics>* returned,
                                             std::vector<StickyDraw>* new_draws) {
  std::vector<NetworkId> eligible;
  if (site.networks_present.empty()) return eligible;

  // Returned topics depend on the caller only through the ledger filter, so
  // the sticky candidates are drawn once for the whole page.
  const auto candidates = user.window_candidates(site.site_id, epoch, sticky_rng, new_draws);
  for (NetworkId n : site.networks_present) {
    const auto& network = world.network(n);
    bool interested = false;
    if (returned != nullptr) {
      auto visible = filter_for_caller(candidates, n, user.ledger());
      interested = std::any_of(visible.begin(), visible.end(), [&](const auto& c) { return network.targets(c.topic); });
      returned->push_back({n, std::move(visible)});
    } else {
      for (const auto& c : candidates) {
        if (network.targets(c.topic) && user.ledger().contains(n, c.topic, c.source_epoch)) {
          interested = true;
          break;
        }
      }
    }
    if (interested) eligible.push_back(n);
  }
  return eligible;
}

std::optional<NetworkId> pick_winner(std::span<const NetworkId> eligible, RngStream& rng) {
  if (eligible.empty()) return std::nullopt;
  return eligible[rng.uniform_index(eligible.size())];
}

void count_page(const PageVisitOutcome& outcome, ScenarioCounters& counters) {
  const auto spaces = static_cast<std::uint64_t>(outcome.winners.size());
  counters.page_visits += 1;
  counters.total_spaces += spaces;
  counters.filled_spaces += static_cast<std::uint64_t>(
      std::count_if(outcome.winners.begin(), outcome.winners.end(), [](const auto& w) { return w.has_value(); }));

  for (NetworkId n : outcome.present) {
    auto& c = counters.per_network.at(n);
    c.spaces_present += spaces;
    const bool is_eligible = std::binary_search(outcome.eligible.begin(), outcome.eligible.end(), n);
    const auto flags = classify_competition(is_eligible, outcome.eligible.size(), outcome.present.size());
    if (flags.eligible) c.spaces_eligible += spaces;
    if (flags.low_competition) c.spaces_low_competition += spaces;
    if (flags.sole) c.spaces_sole += spaces;
  }
}

PageVisitOutcome simulate_page_visit(const World& world, UserTopicsState& user, SiteId site_id, Epoch epoch,
                                     bool counted, ScenarioCounters& counters, PageRandomness rng, EventLog* log) {
  const auto& site = world.site(site_id);
  user.observe_visit(site, epoch);

  PageVisitRecord* record = nullptr;
  std::vector<StickyDraw> draws;
  if (log != nullptr) {
    record = &log->visits.emplace_back();
    record->user = user.user_id();
    record->epoch = epoch;
    record->site = site_id;
    record->counted = counted;
  }

  PageVisitOutcome outcome;
  outcome.site_id = site_id;
  outcome.present = site.networks_present;
  outcome.eligible = determine_eligibility(world, site, user, epoch, rng.sticky,
                                           record ? &record->returned : nullptr, record ? &draws : nullptr);
  outcome.winners.reserve(site.ad_spaces);
  for (std::uint32_t space = 0; space < site.ad_spaces; ++space) {
    outcome.winners.push_back(pick_winner(outcome.eligible, rng.winner));
  }

  if (counted) count_page(outcome, counters);

  if (record != nullptr) {
    record->present = outcome.present;
    record->eligible = outcome.eligible;
    record->winners = outcome.winners;
    for (const auto& d : draws) log->sticky.push_back({user.user_id(), d});
  }
  return outcome;
}

}  // namespace topics_sim
