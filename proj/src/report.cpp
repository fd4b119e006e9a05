#include "msf/report.hpp"

#include <fstream>
#include <stdexcept>

namespace msf {

nlohmann::json to_json(const CostCounters& c) {
  return {{"words_redistributed", c.words_redistributed},
          {"words_broadcast", c.words_broadcast},
          {"words_reduced", c.words_reduced},
          {"words_allgathered", c.words_allgathered},
          {"remote_writes", c.remote_writes},
          {"local_combines", c.local_combines}};
}

nlohmann::json to_json(const IterationStats& s) {
  return {{"hooks", s.hooks},
          {"tie_breaks", s.tie_breaks},
          {"shortcut_sub_iterations", s.shortcut_sub_iterations},
          {"changed_count", s.changed_count},
          {"counters", to_json(s.counters)}};
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json doc;
  doc["command"] = command;
  doc["input"] = input;
  doc["options"] = options;
  doc["result"] = result;
  auto iters = nlohmann::json::array();
  CostCounters totals;
  for (const auto& s : per_iteration) {
    iters.push_back(msf::to_json(s));
    totals += s.counters;
  }
  doc["per_iteration"] = std::move(iters);
  doc["totals"] = {{"counters", msf::to_json(totals)}};
  if (verified.has_value()) doc["verified"] = *verified;
  doc["timings"] = timings;
  return doc;
}

void RunReport::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << to_json().dump(2) << "\n";
  if (!out.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace msf
