#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tltrack/ltl.hpp"
#include "tltrack/types.hpp"

namespace tlt::automaton {

/**
 * Deterministic finite-state automaton over valuations of a fixed atom set,
 * built by formula progression. States are canonical residual formulas;
 * the True residual accepts, the False residual rejects, both absorbing.
 */
struct Automaton {
  ltl::Formula phi;
  std::vector<std::string> atoms;            // valuation bit i corresponds to atoms[i]
  std::vector<ltl::Formula> state_formula;   // canonical residuals, index == state id
  std::vector<std::string> state_name;       // q0, q1, ..., qf (True), reject (False)
  int initial = 0;
  std::vector<int> table;                    // table[q * (1<<atoms) + val] -> successor
  std::set<int> accepting;
  std::set<int> rejecting;

  int num_states() const { return static_cast<int>(state_formula.size()); }
  int num_vals() const { return 1 << static_cast<int>(atoms.size()); }
  int step(int q, unsigned val) const { return table[static_cast<size_t>(q) * num_vals() + val]; }
  bool is_accepting(int q) const { return accepting.count(q) > 0; }
  bool is_rejecting(int q) const { return rejecting.count(q) > 0; }

  /** Bitmask for a valuation; every automaton atom must be assigned. */
  unsigned encode(const ltl::Valuation& v) const;
  ltl::Valuation decode(unsigned val) const;

  int state_by_name(const std::string& name) const;
};

/**
 * Build the progression FSA of a co-safe formula. atom_order fixes the
 * valuation bit layout (defaults to the formula's sorted atoms; extra atoms
 * are allowed). At most 8 atoms; construction aborts past state_cap states.
 */
Automaton build_fsa(const ltl::Formula& f, std::vector<std::string> atom_order = {},
                    int state_cap = 4096);

/** Monitor advance: successor state plus acceptance/rejection flags. */
struct MonitorStep {
  int state;
  bool accepting;
  bool rejecting;
};
MonitorStep monitor_step(const Automaton& a, int q, const ltl::Valuation& v);

struct Edge {
  int from = 0;
  int to = 0;
  unsigned val = 0;        // valuation bitmask labeling the transition
  std::string goal;        // designated goal atom for this edge, may be empty
};

struct PathStep {
  Edge edge;
  double weight = 0.0;
};

/**
 * Dijkstra query over the automaton digraph. Transitions into rejecting
 * states and self-loops are never path candidates. `feasible` prunes
 * valuations (e.g. mutually exclusive tracking goals); `goal_of` names the
 * goal atom an edge commits to; `weight` prices an edge given the position
 * reached so far and reports the position after taking it. Defaults: all
 * valuations feasible, goal = the unique true atom (else empty), unit
 * weights with positions carried through unchanged.
 */
struct PathQuery {
  std::function<bool(unsigned val)> feasible;
  std::function<std::string(unsigned val)> goal_of;
  std::function<double(const Edge& e, const Vec& from_pos, Vec& pos_after)> weight;
  Vec start_pos;
};

/**
 * Cheapest path from the initial state to an accepting state, deterministic
 * under ties (smaller state id, then smaller valuation wins). Empty path when
 * the initial state accepts. Throws NoAcceptingPath when none is reachable.
 */
std::vector<PathStep> shortest_accepting_path(const Automaton& a, const PathQuery& q = {});

/**
 * One tracking sub-problem per path edge, plus a terminal hold segment.
 * Safety is the phi_s polytope; `forbidden` lists atoms that must stay false
 * during the segment (atoms whose lone truth would send the current FSA
 * state into rejection).
 */
struct SubProblem {
  int index = 0;
  bool hold = false;
  std::string goal_atom;        // empty for the hold segment
  ltl::TrackBall goal;          // valid when !hold
  Box safety;
  std::vector<std::string> forbidden;
  std::string entry;            // "x0" or the previous goal atom
  std::string safety_encoding;  // e.g. "!p2 & p3"
};

struct Decomposition {
  std::vector<SubProblem> subproblems;  // execution order; last one is the hold segment
  std::vector<std::string> warnings;
};

struct DecomposeOptions {
  double validation_horizon = 100.0;  // reference-in-polytope check window
  int validation_samples = 2048;
};

/**
 * Turn an accepting path into executable sub-problems. phi_s must be
 * G <atom> with a BoxMembership predicate. Every path edge must carry a
 * TrackBall goal whose reference stays strictly inside the safety polytope
 * over the validation window. Warns when two TrackBall predicates share a
 * trajectory id.
 */
Decomposition decompose(const Automaton& a, const std::vector<PathStep>& path,
                        const ltl::PredicateTable& preds, const ltl::Formula& phi_s,
                        const ltl::TrajectoryTable& refs, const DecomposeOptions& opt = {});

}  // namespace tlt::automaton
