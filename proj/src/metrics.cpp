#include "topics_sim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace topics_sim {

NetworkCounters& NetworkCounters::operator+=(const NetworkCounters& other) {
  spaces_present += other.spaces_present;
  spaces_eligible += other.spaces_eligible;
  spaces_low_competition += other.spaces_low_competition;
  spaces_sole += other.spaces_sole;
  return *this;
}

ScenarioCounters& ScenarioCounters::operator+=(const ScenarioCounters& other) {
  if (per_network.size() < other.per_network.size()) per_network.resize(other.per_network.size());
  for (std::size_t i = 0; i < other.per_network.size(); ++i) per_network[i] += other.per_network[i];
  total_spaces += other.total_spaces;
  filled_spaces += other.filled_spaces;
  page_visits += other.page_visits;
  return *this;
}

CompetitionFlags classify_competition(bool network_eligible, std::size_t eligible_count, std::size_t present_count) {
  if (!network_eligible) return {false, false, false};
  // A network alone on the page competes with nobody, which counts as low
  // competition as well as sole competitor.
  const bool low = eligible_count < present_count || present_count == 1;
  return {true, low, eligible_count == 1};
}

std::vector<NetworkRatios> finalize_ratios(const ScenarioCounters& counters, std::span<const double> presence) {
  std::vector<NetworkRatios> out;
  out.reserve(counters.per_network.size());
  for (NetworkId n = 0; n < counters.per_network.size(); ++n) {
    const auto& c = counters.per_network[n];
    NetworkRatios r;
    r.network_id = n;
    r.presence = n < presence.size() ? presence[n] : 0.0;
    if (c.spaces_present == 0) {
      r.no_presence = true;
    } else {
      const auto denom = static_cast<double>(c.spaces_present);
      r.eligibility_ratio = static_cast<double>(c.spaces_eligible) / denom;
      r.low_competition_ratio = static_cast<double>(c.spaces_low_competition) / denom;
      r.sole_competitor_ratio = static_cast<double>(c.spaces_sole) / denom;
    }
    out.push_back(r);
  }
  return out;
}

double fill_rate(std::uint64_t total_spaces, std::uint64_t filled_spaces) {
  if (total_spaces == 0) throw MetricError("fill rate undefined: no ad spaces were counted");
  if (filled_spaces > total_spaces) throw MetricError("fill rate undefined: more filled spaces than spaces");
  return static_cast<double>(filled_spaces) / static_cast<double>(total_spaces);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 (0-based) share rank (i + 1 + j) / 2.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw MetricError("spearman: inputs differ in length");
  if (x.size() < 2) throw MetricError("spearman: need at least two observations");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;  // average ranks always sum to n(n+1)/2
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw MetricError("spearman: undefined for constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SpearmanSummary presence_correlations(std::span<const NetworkRatios> ratios) {
  std::vector<double> presence, elig, low, sole;
  for (const auto& r : ratios) {
    presence.push_back(r.presence);
    elig.push_back(r.eligibility_ratio);
    low.push_back(r.low_competition_ratio);
    sole.push_back(r.sole_competitor_ratio);
  }
  auto safe = [&](const std::vector<double>& y) -> std::optional<double> {
    try {
      return spearman(presence, y);
    } catch (const MetricError&) {
      return std::nullopt;
    }
  };
  return {safe(elig), safe(low), safe(sole)};
}

std::string config_hash(const SimConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_config(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

MetricsReport make_report(const ScenarioCounters& counters, std::span<const double> presence, const SimConfig& cfg) {
  MetricsReport report;
  report.per_network = finalize_ratios(counters, presence);
  report.fill_rate = fill_rate(counters.total_spaces, counters.filled_spaces);
  report.spearman = presence_correlations(report.per_network);
  report.seed = cfg.seed;
  report.config_hash = config_hash(cfg);
  return report;
}

}  // namespace topics_sim
