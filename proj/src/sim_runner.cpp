#include "topics_sim/sim_runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "topics_sim/auction.hpp"
#include "topics_sim/browsing.hpp"
#include "topics_sim/rng.hpp"
#include "topics_sim/topics_engine.hpp"

namespace topics_sim {

UserRun simulate_user(const World& world, const SimConfig& cfg, UserId user, bool record_events) {
  UserRun run;
  run.counters = ScenarioCounters(world.networks().size());
  EventLog* log = record_events ? &run.events : nullptr;

  UserHistory history(user, static_cast<std::uint32_t>(world.websites().size()));
  UserTopicsState topics(user, cfg, static_cast<std::uint32_t>(world.networks().size()));

  for (Epoch epoch = 1; epoch <= cfg.num_weeks; ++epoch) {
    auto visit_rng = derive_stream(cfg.seed, {StreamPurpose::kVisits, user, epoch});
    auto sticky_rng = derive_stream(cfg.seed, {StreamPurpose::kSticky, user, epoch});
    auto winner_rng = derive_stream(cfg.seed, {StreamPurpose::kWinner, user, epoch});
    const bool counted = epoch > cfg.warmup_epochs;

    const auto visits = generate_epoch_visits(history, cfg, epoch, visit_rng);
    for (SiteId site : visits) {
      simulate_page_visit(world, topics, site, epoch, counted, run.counters, {sticky_rng, winner_rng}, log);
    }
    run.page_visits += visits.size();
    history.commit_epoch(visits);

    auto tie_rng = derive_stream(cfg.seed, {StreamPurpose::kTieBreak, user, epoch});
    const auto& top = topics.close_epoch(epoch, tie_rng);
    if (log != nullptr) log->tops.push_back(top);
    topics.discard_stale(epoch + 1);
  }
  return run;
}

RunResult run_simulation(const SimConfig& cfg, const RunOptions& options) {
  validate_config(cfg);
  if (options.presence_override) {
    return run_simulation(cfg, generate_world(cfg, *options.presence_override), options);
  }
  return run_simulation(cfg, generate_world(cfg), options);
}

RunResult run_simulation(const SimConfig& cfg, const World& world, const RunOptions& options) {
  validate_config(cfg);
  const auto start = std::chrono::steady_clock::now();

  unsigned workers = options.workers == 0 ? std::max(1U, std::thread::hardware_concurrency()) : options.workers;
  workers = std::min<unsigned>(workers, cfg.num_users);

  const auto num_networks = world.networks().size();
  std::vector<ScenarioCounters> shards(workers, ScenarioCounters(num_networks));
  std::vector<std::uint64_t> shard_visits(workers, 0);
  std::vector<EventLog> user_logs(options.record_events ? cfg.num_users : 0);

  std::atomic<UserId> next_user{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&](unsigned shard) {
    try {
      for (UserId u = next_user++; u < cfg.num_users; u = next_user++) {
        auto run = simulate_user(world, cfg, u, options.record_events);
        shards[shard] += run.counters;
        shard_visits[shard] += run.page_visits;
        if (options.record_events) user_logs[u] = std::move(run.events);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next_user = cfg.num_users;
    }
  };

  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  if (failure) std::rethrow_exception(failure);

  RunResult result;
  result.counters = ScenarioCounters(num_networks);
  for (const auto& shard : shards) result.counters += shard;
  for (auto v : shard_visits) result.page_visits_simulated += v;
  for (const auto& net : world.networks()) result.presence.push_back(net.presence);
  result.report = make_report(result.counters, result.presence, cfg);

  if (options.record_events) {
    EventLog merged;
    for (auto& log : user_logs) merged.append(std::move(log));
    result.events = std::move(merged);
  }
  result.wall_time =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  return result;
}

}  // namespace topics_sim
