#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "topics_sim/core_model.hpp"
#include "topics_sim/event_log.hpp"
#include "topics_sim/metrics.hpp"
#include "topics_sim/world.hpp"

namespace topics_sim {

struct RunOptions {
  // Worker threads; users are partitioned among them. 0 means one per core.
  unsigned workers = 1;
  // Record a full trace in RunResult::events.
  bool record_events = false;
  // Per-network presence replacing cfg.presence; may be empty (no networks).
  std::optional<std::vector<double>> presence_override;
};

struct RunResult {
  MetricsReport report;
  ScenarioCounters counters;
  std::vector<double> presence;
  std::chrono::milliseconds wall_time{0};
  std::uint64_t page_visits_simulated = 0;
  std::optional<EventLog> events;
};

// Counters and trace for one user's complete timeline over all epochs.
struct UserRun {
  ScenarioCounters counters;
  std::uint64_t page_visits = 0;
  EventLog events;
};

UserRun simulate_user(const World& world, const SimConfig& cfg, UserId user, bool record_events);

// Whole run: world generation, every user through every epoch, warm-up
// gating, counter merge, and the final report. The counters do not depend on
// the number of workers. Throws ConfigError for an invalid config and
// MetricError when no ad space was counted.
RunResult run_simulation(const SimConfig& cfg, const RunOptions& options = {});

// Same, on a prebuilt world.
RunResult run_simulation(const SimConfig& cfg, const World& world, const RunOptions& options = {});

}  // namespace topics_sim
