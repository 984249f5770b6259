#include "topics_sim/event_log.hpp"

#include <map>
#include <utility>

#include "json.hpp"

namespace topics_sim {

void EventLog::append(EventLog&& other) {
  visits.insert(visits.end(), std::make_move_iterator(other.visits.begin()),
                std::make_move_iterator(other.visits.end()));
  tops.insert(tops.end(), std::make_move_iterator(other.tops.begin()), std::make_move_iterator(other.tops.end()));
  sticky.insert(sticky.end(), other.sticky.begin(), other.sticky.end());
}

void write_event_log(std::ostream& out, const EventLog& log) {
  for (const auto& v : log.visits) {
    nlohmann::ordered_json j;
    j["user"] = v.user;
    j["epoch"] = v.epoch;
    j["site"] = v.site;
    j["counted"] = v.counted;
    j["present"] = v.present;
    j["eligible"] = v.eligible;
    auto winners = nlohmann::ordered_json::array();
    for (const auto& w : v.winners) {
      if (w) {
        winners.push_back(*w);
      } else {
        winners.push_back(nullptr);
      }
    }
    j["winners"] = std::move(winners);
    auto returned = nlohmann::ordered_json::object();
    for (const auto& caller : v.returned) {
      auto topics = nlohmann::ordered_json::array();
      for (const auto& c : caller.returned) topics.push_back({{"topic", c.topic.value}, {"epoch", c.source_epoch}});
      returned[std::to_string(caller.network)] = std::move(topics);
    }
    j["returned"] = std::move(returned);
    out << j.dump() << '\n';
  }
}

void write_topics_dump(std::ostream& out, const EventLog& log) {
  std::map<std::pair<UserId, Epoch>, std::map<SiteId, std::uint32_t>> sticky;
  for (const auto& s : log.sticky) sticky[{s.user, s.draw.source_epoch}][s.draw.site] = s.draw.topic.value;
  for (const auto& t : log.tops) {
    nlohmann::ordered_json j;
    j["user"] = t.user_id;
    j["epoch"] = t.epoch;
    auto top = nlohmann::ordered_json::array();
    for (auto topic : t.top) top.push_back(topic.value);
    j["top"] = std::move(top);
    auto picks = nlohmann::ordered_json::object();
    if (const auto it = sticky.find({t.user_id, t.epoch}); it != sticky.end()) {
      for (const auto& [site, topic] : it->second) picks[std::to_string(site)] = topic;
    }
    j["sticky"] = std::move(picks);
    out << j.dump() << '\n';
  }
}

}  // namespace topics_sim
