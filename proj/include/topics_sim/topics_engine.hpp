#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "topics_sim/core_model.hpp"
#include "topics_sim/rng.hpp"

namespace topics_sim {

// Per-epoch topic visit counts for one user. A site visit adds one to each
// of the site's topics.
class TopicHistogram {
 public:
  explicit TopicHistogram(std::uint32_t taxonomy_size) : counts_(taxonomy_size, 0) {}

  void add(TopicId topic) { ++counts_.at(topic.value); }
  void add(TopicId topic, std::uint32_t times) { counts_.at(topic.value) += times; }
  std::uint32_t count(TopicId topic) const { return counts_.at(topic.value); }
  std::uint32_t distinct() const;
  void clear() { std::fill(counts_.begin(), counts_.end(), 0); }
  std::uint32_t taxonomy_size() const { return static_cast<std::uint32_t>(counts_.size()); }

 private:
  std::vector<std::uint32_t> counts_;
};

struct EpochTopTopics {
  UserId user_id = 0;
  Epoch epoch = 0;
  std::vector<TopicId> top;  // most frequent first, distinct
};

// The `top_n` most frequent topics, fewer if fewer were seen. Tied topics are
// ordered by a uniform shuffle drawn from `tie_rng`.
std::vector<TopicId> compute_top_topics(const TopicHistogram& histogram, std::uint32_t top_n, RngStream& tie_rng);

// Which network saw the user with which topic in which epoch. One ledger per
// user; each epoch is a dense topic x network bit matrix.
class ObservationLedger {
 public:
  ObservationLedger(std::uint32_t num_networks, std::uint32_t taxonomy_size);

  // Every network present on `site` observes every topic of `site`.
  void record(const Website& site, Epoch epoch);
  bool contains(NetworkId network, TopicId topic, Epoch epoch) const;
  // Number of distinct (network, topic) records in `epoch`.
  std::size_t record_count(Epoch epoch) const;
  // Drops all epochs < `epoch`.
  void discard_before(Epoch epoch);
  std::vector<Epoch> epochs() const;

 private:
  std::size_t words_per_topic_;
  std::uint32_t num_networks_;
  std::uint32_t taxonomy_size_;
  std::map<Epoch, std::vector<std::uint64_t>> by_epoch_;
};

inline void record_observation(ObservationLedger& ledger, const Website& site, Epoch epoch) {
  ledger.record(site, epoch);
}

// The one topic a (site, source epoch) pair exposes for a user, fixed on first
// use. Keys are implicitly scoped to the owning user.
class StickySelectionCache {
 public:
  std::optional<TopicId> find(SiteId site, Epoch source_epoch) const;

  struct Selection {
    TopicId topic;
    bool newly_drawn;
  };
  // Cached topic, or a uniform draw from `top` that is cached from now on.
  // `top` must be non-empty.
  Selection get_or_draw(SiteId site, Epoch source_epoch, std::span<const TopicId> top, RngStream& rng);

  void discard_before(Epoch source_epoch);
  std::size_t size() const;

 private:
  std::map<Epoch, std::unordered_map<SiteId, TopicId>> by_epoch_;
};

struct WindowCandidate {
  Epoch source_epoch;
  TopicId topic;

  friend bool operator==(const WindowCandidate&, const WindowCandidate&) = default;
};

struct StickyDraw {
  SiteId site;
  Epoch source_epoch;
  TopicId topic;
};

// Topics API state of a single user: running histogram for the current epoch,
// past top lists, the observation ledger, and the sticky selections.
class UserTopicsState {
 public:
  UserTopicsState(UserId user, const SimConfig& cfg, std::uint32_t num_networks);

  UserId user_id() const { return user_; }
  const ObservationLedger& ledger() const { return ledger_; }
  const StickySelectionCache& sticky() const { return sticky_; }
  const TopicHistogram& histogram() const { return histogram_; }
  // Top list of `epoch`, or nullptr if that epoch has not closed.
  const EpochTopTopics* top_topics(Epoch epoch) const;

  // The user registers the site's topics and the networks on the page note
  // them as observed.
  void observe_visit(const Website& site, Epoch epoch);

  // Fixes the epoch's top list from the running histogram and resets it.
  const EpochTopTopics& close_epoch(Epoch epoch, RngStream& tie_rng);

  // One sticky candidate per past window epoch with a non-empty top list,
  // newest source epoch first. Draws not yet cached are appended to
  // `new_draws` when given.
  std::vector<WindowCandidate> window_candidates(SiteId site, Epoch current_epoch, RngStream& sticky_rng,
                                                 std::vector<StickyDraw>* new_draws = nullptr);

  // Forgets everything that no query at `current_epoch` or later can read.
  void discard_stale(Epoch current_epoch);

 private:
  UserId user_;
  std::uint32_t topic_window_;
  std::uint32_t top_n_;
  TopicHistogram histogram_;
  ObservationLedger ledger_;
  StickySelectionCache sticky_;
  std::map<Epoch, EpochTopTopics> tops_;
};

// Candidates the caller is allowed to see: those it observed for this user in
// the candidate's source epoch.
std::vector<WindowCandidate> filter_for_caller(std::span<const WindowCandidate> candidates, NetworkId caller,
                                               const ObservationLedger& ledger);

// Topics returned to `caller` on `site` at `current_epoch`, duplicates
// collapsed, at most topic_window entries.
std::vector<TopicId> topics_for_caller(UserTopicsState& state, SiteId site, NetworkId caller, Epoch current_epoch,
                                       RngStream& sticky_rng);

}  // namespace topics_sim
