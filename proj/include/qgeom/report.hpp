#pragma once

#include <string>
#include <vector>

#include "qgeom/json_io.hpp"

namespace qgeom {

struct Check {
  std::string name;
  double defect;
  double tolerance;
  bool pass;
};

/// Deterministic run summary: every defect is reported next to its tolerance,
/// and the verdict is pass only when every check passes. Inconclusive is
/// reserved for classification runs that refuse to decide.
struct RunReport {
  std::string command;
  std::string inputs_digest;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::string verdict;  // pass | fail | inconclusive
  json extra = json::object();

  void add_check(const std::string& name, double defect, double tolerance) {
    checks.push_back(Check{name, defect, tolerance, defect <= tolerance});
  }

  void finalize(bool inconclusive = false) {
    bool all = true;
    for (const Check& c : checks) all = all && c.pass;
    verdict = inconclusive ? "inconclusive" : (all ? "pass" : "fail");
  }

  int exit_code() const {
    if (verdict == "pass") return 0;
    if (verdict == "inconclusive") return 3;
    return 1;
  }

  json to_json() const {
    json jchecks = json::array();
    for (const Check& c : checks)
      jchecks.push_back(json{{"name", c.name},
                             {"defect", c.defect},
                             {"tolerance", c.tolerance},
                             {"pass", c.pass}});
    json j{{"command", command},
           {"inputs_digest", inputs_digest},
           {"seed", seed},
           {"checks", jchecks},
           {"verdict", verdict}};
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    return j;
  }
};

inline void emit_report(const RunReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << canonical_json(r.to_json());
}

}  // namespace qgeom
