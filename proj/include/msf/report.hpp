#ifndef MSF_REPORT_HPP
#define MSF_REPORT_HPP

#include <json.hpp>

#include <optional>
#include <string>

#include "msf/cost_counters.hpp"
#include "msf/engine.hpp"

// Structured run record emitted by the CLI as a single JSON document. Keys
// serialize in sorted order, so reports with equal content are byte-equal;
// the timings subtree is the only part expected to differ between runs.

namespace msf {

nlohmann::json to_json(const CostCounters& c);
nlohmann::json to_json(const IterationStats& s);

struct RunReport {
  std::string command;
  nlohmann::json input;    // where the graph came from
  nlohmann::json options;  // flag echo
  nlohmann::json result;
  std::vector<IterationStats> per_iteration;
  std::optional<bool> verified;
  nlohmann::json timings;

  nlohmann::json to_json() const;
  void write(const std::string& path) const;
};

}  // namespace msf

#endif
