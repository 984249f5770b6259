#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace topics_sim {

using UserId = std::uint32_t;
using SiteId = std::uint32_t;
using NetworkId = std::uint32_t;
// Epochs are 1-based; epoch 0 never occurs in a run.
using Epoch = std::uint32_t;

// Index into the topic taxonomy, always < taxonomy_size of the owning World.
struct TopicId {
  std::uint16_t value = 0;

  constexpr TopicId() = default;
  constexpr explicit TopicId(std::uint32_t v) : value(static_cast<std::uint16_t>(v)) {}

  friend constexpr auto operator<=>(TopicId, TopicId) = default;
};

// Either one presence fraction shared by every network or one entry per
// network.
using PresenceSpec = std::variant<double, std::vector<double>>;

struct SimConfig {
  std::uint32_t num_users = 100;
  std::uint32_t num_websites = 50'000;
  std::uint32_t num_ad_networks = 50;
  std::uint32_t num_weeks = 50;
  std::uint32_t pages_per_epoch = 334;
  double user_loyalty = 0.43;
  std::uint32_t ads_on_site = 10;
  std::uint32_t max_topics = 3;
  PresenceSpec presence = 0.8;
  double interest_proportion = 1.0;
  std::uint32_t taxonomy_size = 349;
  std::uint64_t seed = 1;
  std::uint32_t warmup_epochs = 3;
  std::uint32_t topic_window = 3;
  std::uint32_t top_n_topics = 5;

  // Presence of network `n` under either form of `presence`.
  double presence_of(NetworkId n) const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct Website {
  SiteId site_id = 0;
  std::vector<TopicId> topics;              // distinct, sorted
  std::vector<NetworkId> networks_present;  // sorted ascending
  std::uint32_t ad_spaces = 0;
};

struct AdNetwork {
  NetworkId network_id = 0;
  double presence = 0.0;
  std::vector<TopicId> interest_topics;  // distinct, sorted

  bool targets(TopicId topic) const { return topic.value < interest_mask_.size() && interest_mask_[topic.value]; }

  void set_interest(std::vector<TopicId> topics, std::uint32_t taxonomy_size);

 private:
  std::vector<bool> interest_mask_;
};

struct UserPercentileProfile {
  int percentile;
  std::uint32_t pages_per_epoch;
  double loyalty;
};

// Weekly unique-site counts and revisit shares of the browsing dataset's user
// percentiles.
inline constexpr std::array<UserPercentileProfile, 5> kPercentileProfiles{{
    {10, 33, 0.14},
    {25, 114, 0.28},
    {50, 335, 0.43},
    {75, 668, 0.58},
    {90, 1083, 0.74},
}};

// Throws std::invalid_argument for a percentile outside the table.
const UserPercentileProfile& percentile_profile(int percentile);

// Network interest set size: round(interest_proportion * taxonomy_size), at
// least one topic.
std::uint32_t interest_set_size(const SimConfig& cfg);

struct ConfigViolation {
  std::string field;
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigViolation> violations);

  const std::vector<ConfigViolation>& violations() const { return violations_; }

 private:
  std::vector<ConfigViolation> violations_;
};

// Every violated invariant, one entry per offending field. Empty when valid.
std::vector<ConfigViolation> check_config(const SimConfig& cfg);

// Returns `cfg` unchanged, or throws ConfigError listing every violation.
SimConfig validate_config(const SimConfig& cfg);

// ---- Config file format -------------------------------------------------
//
// One `key = value` per line; keys are the SimConfig field names. Lists are
// comma separated. A presence list with a single entry is written with a
// trailing comma ("0.5,") so that it stays distinct from the scalar form.
// '#' starts a comment line.

// Sets one field from its textual value. Throws ConfigError naming the key on
// an unknown key or unparsable value.
void apply_config_value(SimConfig& cfg, std::string_view key, std::string_view value);

// True if `key` names a SimConfig field.
bool is_config_key(std::string_view key);

SimConfig parse_config(std::string_view text);
SimConfig load_config_file(const std::string& path);
std::string serialize_config(const SimConfig& cfg);

// Shortest round-trippable decimal representation.
std::string format_double(double value);

}  // namespace topics_sim
