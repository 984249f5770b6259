#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "topics_sim/core_model.hpp"

namespace topics_sim {

// Ad-space tallies for one network, counted over spaces on pages where the
// network is present.
struct NetworkCounters {
  std::uint64_t spaces_present = 0;
  std::uint64_t spaces_eligible = 0;
  std::uint64_t spaces_low_competition = 0;
  std::uint64_t spaces_sole = 0;

  NetworkCounters& operator+=(const NetworkCounters& other);
  friend bool operator==(const NetworkCounters&, const NetworkCounters&) = default;
};

struct ScenarioCounters {
  std::vector<NetworkCounters> per_network;
  std::uint64_t total_spaces = 0;
  std::uint64_t filled_spaces = 0;
  std::uint64_t page_visits = 0;

  ScenarioCounters() = default;
  explicit ScenarioCounters(std::size_t num_networks) : per_network(num_networks) {}

  // Element-wise addition; shard order does not matter.
  ScenarioCounters& operator+=(const ScenarioCounters& other);
  friend bool operator==(const ScenarioCounters&, const ScenarioCounters&) = default;
};

struct NetworkRatios {
  NetworkId network_id = 0;
  double presence = 0.0;
  double eligibility_ratio = 0.0;
  double low_competition_ratio = 0.0;
  double sole_competitor_ratio = 0.0;
  // Set when the network never appeared on a counted page; its ratios are 0.
  bool no_presence = false;

  friend bool operator==(const NetworkRatios&, const NetworkRatios&) = default;
};

// Page-level predicates deciding which counters a present network's spaces go
// to. `eligible_count` and `present_count` describe the page.
struct CompetitionFlags {
  bool eligible;
  bool low_competition;
  bool sole;
};
CompetitionFlags classify_competition(bool network_eligible, std::size_t eligible_count, std::size_t present_count);

std::vector<NetworkRatios> finalize_ratios(const ScenarioCounters& counters, std::span<const double> presence);

class MetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// filled / total. Throws MetricError when total is zero or filled > total.
double fill_rate(std::uint64_t total_spaces, std::uint64_t filled_spaces);

// 1-based ranks, ties receive the average of the positions they span.
std::vector<double> average_ranks(std::span<const double> values);

// Spearman's rho as the Pearson correlation of average ranks. Throws
// MetricError if the lengths differ, fewer than two points are given, or
// either input is constant.
double spearman(std::span<const double> x, std::span<const double> y);

struct SpearmanSummary {
  // nullopt when the correlation is undefined (constant input, < 2 networks).
  std::optional<double> eligibility;
  std::optional<double> low_competition;
  std::optional<double> sole_competitor;
};

SpearmanSummary presence_correlations(std::span<const NetworkRatios> ratios);

struct MetricsReport {
  std::vector<NetworkRatios> per_network;
  double fill_rate = 0.0;
  SpearmanSummary spearman;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string label;
};

MetricsReport make_report(const ScenarioCounters& counters, std::span<const double> presence, const SimConfig& cfg);

// FNV-1a of the serialized config, as 16 hex digits.
std::string config_hash(const SimConfig& cfg);

}  // namespace topics_sim
