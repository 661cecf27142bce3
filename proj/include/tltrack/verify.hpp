#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace tlt::verify {

/** One property check: observed value against a pinned tolerance/threshold. */
struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;      // the measured quantity
  double bound = 0.0;      // the limit it was held against
  std::string relation;    // "<", "<=", ">", ">=", "==" (value REL bound)
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/**
 * Exhaustive progression-vs-semantics cross check: enumerate NNF formulas
 * over {p, q} bounded by depth and node count, build each co-safe one's FSA,
 * and compare acceptance with strong finite-trace semantics on every trace
 * up to the given length. mismatches must come back 0.
 */
struct LtlAgreement {
  long formulas = 0;
  long traces = 0;
  long mismatches = 0;
};
LtlAgreement ltl_fsa_agreement(int max_depth, int max_nodes, int max_trace_len);

std::vector<std::string> suite_names();

/** Run one suite: barrier | ltl | trigger | learning | mission. */
SuiteResult run_suite(const std::string& name);

nlohmann::json to_json(const SuiteResult& r);

/** Render "PASS suite.check value REL bound" lines. */
std::string to_text(const SuiteResult& r);

}  // namespace tlt::verify
