#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "topics_sim/core_model.hpp"
#include "topics_sim/topics_engine.hpp"

namespace topics_sim {

// What one present network was told on a page.
struct CallerTopics {
  NetworkId network;
  std::vector<WindowCandidate> returned;
};

struct PageVisitRecord {
  UserId user = 0;
  Epoch epoch = 0;
  SiteId site = 0;
  bool counted = false;
  std::vector<NetworkId> present;
  std::vector<NetworkId> eligible;
  std::vector<std::optional<NetworkId>> winners;
  std::vector<CallerTopics> returned;
};

struct StickyRecord {
  UserId user;
  StickyDraw draw;
};

// Full trace of a run, ordered by user, then epoch, then visit order.
struct EventLog {
  std::vector<PageVisitRecord> visits;
  std::vector<EpochTopTopics> tops;
  std::vector<StickyRecord> sticky;

  void append(EventLog&& other);
};

// One JSON object per page visit.
void write_event_log(std::ostream& out, const EventLog& log);

// One JSON object per (user, epoch) with the epoch's top list and the sticky
// selections drawn from it: {"user", "epoch", "top": [...], "sticky": {site: topic}}.
void write_topics_dump(std::ostream& out, const EventLog& log);

}  // namespace topics_sim
