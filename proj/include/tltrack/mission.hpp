#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tltrack/automaton.hpp"
#include "tltrack/engine.hpp"
#include "tltrack/ltl.hpp"
#include "tltrack/plant.hpp"

namespace tlt::mission {

using json = nlohmann::json;

/**
 * A mission file binds the formulas to geometry and dynamics:
 *   phi_c      co-safe objective (ASCII LTL)
 *   phi_s      safety formula, must be G <atom> with a box predicate
 *   predicates name -> track_ball {trajectory, eps} | box {A, r, c, C}
 *   plant      {"builtin": "nl2d"} or {n, m, f: [...], g: [[...]]} expressions in x1..xn
 *   trajectories id -> {"builtin": circle|static, ...} or {h: [...], z0: [...]} or {z: [...]}
 *   x0         initial state
 *   edge_weights optional {"q0->q1": w} absolute overrides for the planner
 */
struct Mission {
  std::string name;
  std::string phi_c_text;
  std::string phi_s_text;
  ltl::Formula phi_c;
  ltl::Formula phi_s;
  ltl::PredicateTable predicates;
  plant::Plant plant;
  std::map<std::string, plant::Exosystem> exosystems;  // keyed by trajectory id
  Vec x0;
  std::map<std::string, double> edge_weights;  // "from->to" state names -> weight
};

Mission load_mission_text(const std::string& text, const std::string& name_hint = "mission");
Mission load_mission_file(const std::string& path);

struct Plan {
  automaton::Automaton fsa;
  std::vector<automaton::PathStep> path;
  automaton::Decomposition decomp;
};

/**
 * Build the FSA, pick the cheapest accepting run (tracking goals mutually
 * exclusive, edges priced by distance between trajectory positions at t=0,
 * mission overrides applied), and decompose it into sub-problems. The
 * reference check window is cfg.horizon.
 */
Plan plan_mission(const Mission& m, const engine::SimConfig& cfg);

json plan_to_json(const Mission& m, const Plan& p);

struct SegmentOutcome {
  int index = 0;
  std::string goal_atom;
  engine::ExitKind exit = engine::ExitKind::Rejected;
  std::string reason;
  double t0 = 0.0;
  double t_end = 0.0;
  engine::SegmentStats stats;
};

struct MissionResult {
  bool success = false;
  bool fsa_accepting = false;
  bool replay_phi_c = false;   // strong semantics over the recorded valuations
  bool replay_phi_s = false;   // weak semantics over the recorded valuations
  bool replay_agrees = false;  // replay_phi_c == fsa_accepting
  std::string failure_reason;
  double total_time = 0.0;
  int final_fsa_state = 0;
  std::vector<SegmentOutcome> segments;
  engine::TraceLog trace;
  ltl::Trace valuations;
  learning::LearnerState learner;
  double runtime_sec = 0.0;
};

/** Execute the planned segments in order, chaining state and the mission clock. */
MissionResult run_mission(const Mission& m, const Plan& p, const engine::SimConfig& cfg);

json summary_to_json(const Mission& m, const Plan& p, const MissionResult& r,
                     const engine::SimConfig& cfg);

/** Canonical JSON rendering of a config; the manifest hash covers it. */
json config_to_json(const engine::SimConfig& cfg);
engine::SimConfig config_from_json(const json& j);
engine::SimConfig load_config_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);

/** Everything that determines a trace: mission text, canonical config, seed, format version. */
json manifest_to_json(const std::string& mission_text, const engine::SimConfig& cfg,
                      const std::vector<std::string>& artifacts);

}  // namespace tlt::mission
