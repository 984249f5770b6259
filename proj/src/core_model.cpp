#include "topics_sim/core_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace topics_sim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string join_violations(const std::vector<ConfigViolation>& violations) {
  std::string out = "invalid configuration:";
  for (const auto& v : violations) {
    out += " [" + v.field + "] " + v.message + ";";
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError({{std::string(key), "cannot parse '" + std::string(value) + "' as " + std::string(expected)}});
}

std::uint64_t parse_u64(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) bad_value(key, text, "unsigned integer");
  return out;
}

std::uint32_t parse_u32(std::string_view key, std::string_view text) {
  const auto v = parse_u64(key, text);
  if (v > UINT32_MAX) bad_value(key, text, "32-bit unsigned integer");
  return static_cast<std::uint32_t>(v);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double out = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) bad_value(key, text, "real number");
  return out;
}

PresenceSpec parse_presence(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text.find(',') == std::string_view::npos) return parse_double(key, text);
  std::vector<double> list;
  const auto whole = text;
  for (;;) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    const bool last = comma == std::string_view::npos;
    if (!item.empty()) {
      list.push_back(parse_double(key, item));
    } else if (!last || list.empty()) {
      // Only a single trailing comma is allowed.
      bad_value(key, whole, "comma-separated list");
    }
    if (last) break;
    text = text.substr(comma + 1);
  }
  return list;
}

using Setter = std::function<void(SimConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"num_users", [](SimConfig& c, auto k, auto v) { c.num_users = parse_u32(k, v); }},
      {"num_websites", [](SimConfig& c, auto k, auto v) { c.num_websites = parse_u32(k, v); }},
      {"num_ad_networks", [](SimConfig& c, auto k, auto v) { c.num_ad_networks = parse_u32(k, v); }},
      {"num_weeks", [](SimConfig& c, auto k, auto v) { c.num_weeks = parse_u32(k, v); }},
      {"pages_per_epoch", [](SimConfig& c, auto k, auto v) { c.pages_per_epoch = parse_u32(k, v); }},
      {"user_loyalty", [](SimConfig& c, auto k, auto v) { c.user_loyalty = parse_double(k, v); }},
      {"ads_on_site", [](SimConfig& c, auto k, auto v) { c.ads_on_site = parse_u32(k, v); }},
      {"max_topics", [](SimConfig& c, auto k, auto v) { c.max_topics = parse_u32(k, v); }},
      {"presence", [](SimConfig& c, auto k, auto v) { c.presence = parse_presence(k, v); }},
      {"interest_proportion", [](SimConfig& c, auto k, auto v) { c.interest_proportion = parse_double(k, v); }},
      {"taxonomy_size", [](SimConfig& c, auto k, auto v) { c.taxonomy_size = parse_u32(k, v); }},
      {"seed", [](SimConfig& c, auto k, auto v) { c.seed = parse_u64(k, v); }},
      {"warmup_epochs", [](SimConfig& c, auto k, auto v) { c.warmup_epochs = parse_u32(k, v); }},
      {"topic_window", [](SimConfig& c, auto k, auto v) { c.topic_window = parse_u32(k, v); }},
      {"top_n_topics", [](SimConfig& c, auto k, auto v) { c.top_n_topics = parse_u32(k, v); }},
  };
  return table;
}

}  // namespace

double SimConfig::presence_of(NetworkId n) const {
  if (const auto* uniform = std::get_if<double>(&presence)) return *uniform;
  return std::get<std::vector<double>>(presence).at(n);
}

void AdNetwork::set_interest(std::vector<TopicId> topics, std::uint32_t taxonomy_size) {
  std::sort(topics.begin(), topics.end());
  interest_mask_.assign(taxonomy_size, false);
  for (TopicId t : topics) interest_mask_.at(t.value) = true;
  interest_topics = std::move(topics);
}

const UserPercentileProfile& percentile_profile(int percentile) {
  for (const auto& p : kPercentileProfiles) {
    if (p.percentile == percentile) return p;
  }
  throw std::invalid_argument("unknown user percentile " + std::to_string(percentile) +
                              " (expected one of 10, 25, 50, 75, 90)");
}

std::uint32_t interest_set_size(const SimConfig& cfg) {
  const auto n = static_cast<std::uint32_t>(std::llround(cfg.interest_proportion * cfg.taxonomy_size));
  return std::clamp<std::uint32_t>(n, 1, std::max<std::uint32_t>(cfg.taxonomy_size, 1));
}

ConfigError::ConfigError(std::vector<ConfigViolation> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

std::vector<ConfigViolation> check_config(const SimConfig& cfg) {
  std::vector<ConfigViolation> out;
  auto require_positive = [&](std::string_view field, std::uint64_t value) {
    if (value == 0) out.push_back({std::string(field), "must be positive"});
  };
  require_positive("num_users", cfg.num_users);
  require_positive("num_websites", cfg.num_websites);
  require_positive("num_ad_networks", cfg.num_ad_networks);
  require_positive("num_weeks", cfg.num_weeks);
  require_positive("pages_per_epoch", cfg.pages_per_epoch);
  require_positive("ads_on_site", cfg.ads_on_site);
  require_positive("max_topics", cfg.max_topics);
  require_positive("taxonomy_size", cfg.taxonomy_size);
  require_positive("topic_window", cfg.topic_window);
  require_positive("top_n_topics", cfg.top_n_topics);

  if (cfg.pages_per_epoch > cfg.num_websites) {
    out.push_back({"pages_per_epoch", "exceeds num_websites (" + std::to_string(cfg.num_websites) + ")"});
  }
  if (!(cfg.user_loyalty >= 0.0 && cfg.user_loyalty <= 1.0)) {
    out.push_back({"user_loyalty", "must lie in [0, 1]"});
  }
  if (!(cfg.interest_proportion > 0.0 && cfg.interest_proportion <= 1.0)) {
    out.push_back({"interest_proportion", "must lie in (0, 1]"});
  }
  if (cfg.max_topics > cfg.taxonomy_size) {
    out.push_back({"max_topics", "exceeds taxonomy_size (" + std::to_string(cfg.taxonomy_size) + ")"});
  }
  if (cfg.top_n_topics > cfg.taxonomy_size) {
    out.push_back({"top_n_topics", "exceeds taxonomy_size (" + std::to_string(cfg.taxonomy_size) + ")"});
  }
  if (cfg.taxonomy_size > 65536) {
    out.push_back({"taxonomy_size", "must not exceed 65536"});
  }
  if (cfg.warmup_epochs >= cfg.num_weeks) {
    out.push_back({"warmup_epochs", "must be smaller than num_weeks (" + std::to_string(cfg.num_weeks) + ")"});
  }

  auto in_unit = [](double p) { return p > 0.0 && p <= 1.0; };
  if (const auto* uniform = std::get_if<double>(&cfg.presence)) {
    if (!in_unit(*uniform)) out.push_back({"presence", "must lie in (0, 1]"});
  } else {
    const auto& list = std::get<std::vector<double>>(cfg.presence);
    if (list.size() != cfg.num_ad_networks) {
      out.push_back({"presence", "list length " + std::to_string(list.size()) + " does not match num_ad_networks (" +
                                     std::to_string(cfg.num_ad_networks) + ")"});
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!in_unit(list[i])) {
        out.push_back({"presence", "entry " + std::to_string(i) + " must lie in (0, 1]"});
        break;
      }
    }
  }
  return out;
}

SimConfig validate_config(const SimConfig& cfg) {
  auto violations = check_config(cfg);
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return cfg;
}

bool is_config_key(std::string_view key) { return setters().contains(key); }

void apply_config_value(SimConfig& cfg, std::string_view key, std::string_view value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError({{std::string(key), "unknown configuration key"}});
  it->second(cfg, key, value);
}

SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError({{"line " + std::to_string(line_no), "expected 'key = value'"}});
    }
    apply_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{"config", "cannot open '" + path + "'"}});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string serialize_config(const SimConfig& cfg) {
  std::ostringstream out;
  out << "num_users = " << cfg.num_users << '\n'
      << "num_websites = " << cfg.num_websites << '\n'
      << "num_ad_networks = " << cfg.num_ad_networks << '\n'
      << "num_weeks = " << cfg.num_weeks << '\n'
      << "pages_per_epoch = " << cfg.pages_per_epoch << '\n'
      << "user_loyalty = " << format_double(cfg.user_loyalty) << '\n'
      << "ads_on_site = " << cfg.ads_on_site << '\n'
      << "max_topics = " << cfg.max_topics << '\n';
  out << "presence = ";
  if (const auto* uniform = std::get_if<double>(&cfg.presence)) {
    out << format_double(*uniform);
  } else {
    const auto& list = std::get<std::vector<double>>(cfg.presence);
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i > 0) out << ',';
      out << format_double(list[i]);
    }
    if (list.size() <= 1) out << ',';
  }
  out << '\n'
      << "interest_proportion = " << format_double(cfg.interest_proportion) << '\n'
      << "taxonomy_size = " << cfg.taxonomy_size << '\n'
      << "seed = " << cfg.seed << '\n'
      << "warmup_epochs = " << cfg.warmup_epochs << '\n'
      << "topic_window = " << cfg.topic_window << '\n'
      << "top_n_topics = " << cfg.top_n_topics << '\n';
  return out.str();
}

}  // namespace topics_sim
