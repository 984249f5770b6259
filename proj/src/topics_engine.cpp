#include "topics_sim/topics_engine.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace topics_sim {

std::uint32_t TopicHistogram::distinct() const {
  return static_cast<std::uint32_t>(std::count_if(counts_.begin(), counts_.end(), [](auto c) { return c > 0; }));
}

std::vector<TopicId> compute_top_topics(const TopicHistogram& histogram, std::uint32_t top_n, RngStream& tie_rng) {
  std::vector<TopicId> seen;
  for (std::uint32_t t = 0; t < histogram.taxonomy_size(); ++t) {
    if (histogram.count(TopicId(t)) > 0) seen.emplace_back(t);
  }
  tie_rng.shuffle(std::span<TopicId>(seen));
  std::stable_sort(seen.begin(), seen.end(),
                   [&](TopicId a, TopicId b) { return histogram.count(a) > histogram.count(b); });
  if (seen.size() > top_n) seen.resize(top_n);
  return seen;
}

// ---- ObservationLedger ---------------------------------------------------

ObservationLedger::ObservationLedger(std::uint32_t num_networks, std::uint32_t taxonomy_size)
    : words_per_topic_((num_networks + 63) / 64), num_networks_(num_networks), taxonomy_size_(taxonomy_size) {}

void ObservationLedger::record(const Website& site, Epoch epoch) {
  if (site.networks_present.empty()) return;
  auto& bits = by_epoch_[epoch];
  if (bits.empty()) bits.assign(words_per_topic_ * taxonomy_size_, 0);
  for (TopicId t : site.topics) {
    auto* row = bits.data() + t.value * words_per_topic_;
    for (NetworkId n : site.networks_present) row[n / 64] |= std::uint64_t{1} << (n % 64);
  }
}

bool ObservationLedger::contains(NetworkId network, TopicId topic, Epoch epoch) const {
  const auto it = by_epoch_.find(epoch);
  if (it == by_epoch_.end() || network >= num_networks_ || topic.value >= taxonomy_size_) return false;
  const auto word = it->second[topic.value * words_per_topic_ + network / 64];
  return (word >> (network % 64)) & 1U;
}

std::size_t ObservationLedger::record_count(Epoch epoch) const {
  const auto it = by_epoch_.find(epoch);
  if (it == by_epoch_.end()) return 0;
  std::size_t total = 0;
  for (auto w : it->second) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

void ObservationLedger::discard_before(Epoch epoch) { by_epoch_.erase(by_epoch_.begin(), by_epoch_.lower_bound(epoch)); }

std::vector<Epoch> ObservationLedger::epochs() const {
  std::vector<Epoch> out;
  for (const auto& [e, bits] : by_epoch_) out.push_back(e);
  return out;
}

// ---- StickySelectionCache -----------------------------------------------

std::optional<TopicId> StickySelectionCache::find(SiteId site, Epoch source_epoch) const {
  const auto e = by_epoch_.find(source_epoch);
  if (e == by_epoch_.end()) return std::nullopt;
  const auto s = e->second.find(site);
  if (s == e->second.end()) return std::nullopt;
  return s->second;
}

StickySelectionCache::Selection StickySelectionCache::get_or_draw(SiteId site, Epoch source_epoch,
                                                                  std::span<const TopicId> top, RngStream& rng) {
  auto& slot = by_epoch_[source_epoch];
  const auto [it, inserted] = slot.try_emplace(site, TopicId{});
  if (inserted) it->second = top[rng.uniform_index(top.size())];
  return {it->second, inserted};
}

void StickySelectionCache::discard_before(Epoch source_epoch) {
  by_epoch_.erase(by_epoch_.begin(), by_epoch_.lower_bound(source_epoch));
}

std::size_t StickySelectionCache::size() const {
  std::size_t total = 0;
  for (const auto& [e, m] : by_epoch_) total += m.size();
  return total;
}

// ---- UserTopicsState -----------------------------------------------------

UserTopicsState::UserTopicsState(UserId user, const SimConfig& cfg, std::uint32_t num_networks)
    : user_(user),
      topic_window_(cfg.topic_window),
      top_n_(cfg.top_n_topics),
      histogram_(cfg.taxonomy_size),
      ledger_(num_networks, cfg.taxonomy_size) {}

const EpochTopTopics* UserTopicsState::top_topics(Epoch epoch) const {
  const auto it = tops_.find(epoch);
  return it == tops_.end() ? nullptr : &it->second;
}

void UserTopicsState::observe_visit(const Website& site, Epoch epoch) {
  for (TopicId t : site.topics) histogram_.add(t);
  record_observation(ledger_, site, epoch);
}

const EpochTopTopics& UserTopicsState::close_epoch(Epoch epoch, RngStream& tie_rng) {
  auto& entry = tops_[epoch];
  entry = EpochTopTopics{user_, epoch, compute_top_topics(histogram_, top_n_, tie_rng)};
  histogram_.clear();
  return entry;
}

std::vector<WindowCandidate> UserTopicsState::window_candidates(SiteId site, Epoch current_epoch,
                                                                RngStream& sticky_rng,
                                                                std::vector<StickyDraw>* new_draws) {
  std::vector<WindowCandidate> out;
  for (std::uint32_t back = 1; back <= topic_window_ && back < current_epoch; ++back) {
    const Epoch source = current_epoch - back;
    const auto* tops = top_topics(source);
    if (tops == nullptr || tops->top.empty()) continue;
    const auto pick = sticky_.get_or_draw(site, source, tops->top, sticky_rng);
    if (pick.newly_drawn && new_draws != nullptr) new_draws->push_back({site, source, pick.topic});
    out.push_back({source, pick.topic});
  }
  return out;
}

void UserTopicsState::discard_stale(Epoch current_epoch) {
  if (current_epoch <= topic_window_) return;
  const Epoch oldest_needed = current_epoch - topic_window_;
  ledger_.discard_before(oldest_needed);
  sticky_.discard_before(oldest_needed);
  tops_.erase(tops_.begin(), tops_.lower_bound(oldest_needed));
}

std::vector<WindowCandidate> filter_for_caller(std::span<const WindowCandidate> candidates, NetworkId caller,
                                               const ObservationLedger& ledger) {
  std::vector<WindowCandidate> out;
  for (const auto& c : candidates) {
    if (ledger.contains(caller, c.topic, c.source_epoch)) out.push_back(c);
  }
  return out;
}

std::vector<TopicId> topics_for_caller(UserTopicsState& state, SiteId site, NetworkId caller, Epoch current_epoch,
                                       RngStream& sticky_rng) {
  const auto candidates = state.window_candidates(site, current_epoch, sticky_rng);
  std::vector<TopicId> out;
  for (const auto& c : filter_for_caller(candidates, caller, state.ledger())) {
    if (std::find(out.begin(), out.end(), c.topic) == out.end()) out.push_back(c.topic);
  }
  return out;
}

}  // namespace topics_sim
