#include <cmath>

#include "framework.hpp"
#include "oracles.hpp"
#include "tltrack/automaton.hpp"
#include "tltrack/errors.hpp"

using namespace tlt;
using namespace tlt::automaton;

namespace {

// The two-goal mission structure: reach p1 while avoiding p2, then reach p2.
Automaton two_goal_fsa() { return build_fsa(ltl::parse_formula("F p2 & (!p2 U p1)")); }

unsigned mask(const Automaton& a, std::initializer_list<const char*> true_atoms) {
  ltl::Valuation v;
  for (const auto& at : a.atoms) v[at] = false;
  for (const char* at : true_atoms) v[at] = true;
  return a.encode(v);
}

}  // namespace

TEST(automaton, two_goal_structure) {
  Automaton a = two_goal_fsa();
  CHECK_EQ(a.num_states(), 4);
  CHECK_EQ(a.atoms.size(), size_t{2});
  CHECK_EQ(a.atoms[0], "p1");
  CHECK_EQ(a.atoms[1], "p2");

  int q0 = a.state_by_name("q0");
  int q1 = a.state_by_name("q1");
  int qf = a.state_by_name("qf");
  int rej = a.state_by_name("reject");
  CHECK_EQ(q0, a.initial);
  CHECK(a.is_accepting(qf));
  CHECK(a.is_rejecting(rej));
  CHECK(!a.is_accepting(q0) && !a.is_rejecting(q0));

  // the intermediate state is the residual after the first goal is hit
  CHECK(a.state_formula[q1] == ltl::simplify(ltl::parse_formula("F p2")));

  CHECK_EQ(a.step(q0, mask(a, {})), q0);
  CHECK_EQ(a.step(q0, mask(a, {"p1"})), q1);
  CHECK_EQ(a.step(q0, mask(a, {"p2"})), rej);
  CHECK_EQ(a.step(q0, mask(a, {"p1", "p2"})), qf);
  CHECK_EQ(a.step(q1, mask(a, {})), q1);
  CHECK_EQ(a.step(q1, mask(a, {"p2"})), qf);

  // accepting and rejecting states absorb every valuation
  for (int v = 0; v < a.num_vals(); ++v) {
    CHECK_EQ(a.step(qf, static_cast<unsigned>(v)), qf);
    CHECK_EQ(a.step(rej, static_cast<unsigned>(v)), rej);
  }
}

TEST(automaton, encode_decode) {
  Automaton a = two_goal_fsa();
  for (unsigned v = 0; v < static_cast<unsigned>(a.num_vals()); ++v) {
    CHECK_EQ(a.encode(a.decode(v)), v);
  }
  CHECK_THROWS_EX(a.encode({{"p1", true}}), Error, e.code() == ErrorCode::InvalidInput);
  CHECK_THROWS_EX(a.state_by_name("q9"), Error, e.code() == ErrorCode::InvalidInput);
}

TEST(automaton, build_fsa_input_checks) {
  CHECK_THROWS_EX(build_fsa(ltl::parse_formula("G p")), Error,
                  e.code() == ErrorCode::InvalidInput);
  CHECK_THROWS_EX(build_fsa(ltl::parse_formula("F p"), {"q"}), Error,
                  e.code() == ErrorCode::InvalidInput);
  CHECK_THROWS_EX(build_fsa(ltl::parse_formula("F p"), {}, 1), Error,
                  e.code() == ErrorCode::StateCapExceeded);
  std::string nine;
  for (int i = 1; i <= 9; ++i) nine += (i > 1 ? " & F a" : "F a") + std::to_string(i);
  CHECK_THROWS_EX(build_fsa(ltl::parse_formula(nine)), Error,
                  e.code() == ErrorCode::InvalidInput);
}

TEST(automaton, explicit_atom_order) {
  Automaton a = build_fsa(ltl::parse_formula("F p1"), {"p3", "p1"});
  CHECK_EQ(a.atoms[0], "p3");
  CHECK_EQ(a.atoms[1], "p1");
  CHECK_EQ(a.num_vals(), 4);
  int qf = a.state_by_name("qf");
  // p1 is bit 1 under this order; p3 alone must not discharge anything
  CHECK_EQ(a.step(a.initial, 1u), a.initial);
  CHECK_EQ(a.step(a.initial, 2u), qf);
  CHECK_EQ(a.step(a.initial, 3u), qf);
}

TEST(automaton, trivial_formulas) {
  Automaton top = build_fsa(ltl::f_true());
  CHECK_EQ(top.num_states(), 1);
  CHECK(top.is_accepting(top.initial));
  CHECK(shortest_accepting_path(top).empty());

  Automaton fp = build_fsa(ltl::parse_formula("F p1"));
  CHECK_EQ(fp.num_states(), 2);  // the obligation and its discharge; rejection unreachable
  CHECK_EQ(fp.rejecting.size(), size_t{0});
}

TEST(automaton, monitor_step) {
  Automaton a = two_goal_fsa();
  auto ms = monitor_step(a, a.initial, {{"p1", false}, {"p2", true}});
  CHECK(ms.rejecting);
  CHECK(!ms.accepting);
  ms = monitor_step(a, a.initial, {{"p1", true}, {"p2", false}});
  CHECK_EQ(ms.state, a.state_by_name("q1"));
  ms = monitor_step(a, ms.state, {{"p1", false}, {"p2", true}});
  CHECK(ms.accepting);
  CHECK_EQ(ms.state, a.state_by_name("qf"));
  // accepting is absorbing under any further observation
  ms = monitor_step(a, ms.state, {{"p1", false}, {"p2", false}});
  CHECK(ms.accepting);
  CHECK_THROWS_EX(monitor_step(a, 99, {{"p1", true}, {"p2", true}}), Error,
                  e.code() == ErrorCode::InvalidInput);
}

TEST(automaton, acceptance_matches_trace_semantics) {
  // Walking the FSA over a trace must agree with strong finite-trace
  // satisfaction (recursive oracle) for every co-safe formula in the corpus.
  auto corpus = oracle::enumerate_formulas({"p", "q"}, 4);
  auto traces = oracle::enumerate_traces({"p", "q"}, 0, 3);
  long formulas = 0, cases = 0;
  for (const auto& f : corpus) {
    if (!ltl::is_co_safe(f)) continue;
    Automaton a = build_fsa(f, {"p", "q"});
    ++formulas;
    for (const auto& tr : traces) {
      int q = a.initial;
      for (const auto& step : tr) q = a.step(q, a.encode(step.v));
      bool fsa_accepts = a.is_accepting(q);
      bool semantics = tr.empty() ? ltl::satisfies_strong(tr, f) : oracle::ltl_strong(f, tr);
      if (fsa_accepts != semantics)
        testfw::fail("FSA disagrees with semantics on " + ltl::to_string(f) + " at trace length " +
                     std::to_string(tr.size()));
      ++cases;
    }
  }
  CHECK(formulas > 500);
  CHECK(cases > 40000);
}

TEST(automaton, shortest_path_two_goals) {
  Automaton a = two_goal_fsa();
  auto path = shortest_accepting_path(a);
  // unit weights favor the single edge that asserts both goals at once
  CHECK_EQ(path.size(), size_t{1});
  CHECK_EQ(path[0].edge.val, mask(a, {"p1", "p2"}));

  // pruning simultaneous goals forces the two-leg route q0 -> q1 -> qf
  PathQuery q;
  q.feasible = [&a](unsigned val) { return __builtin_popcount(val) <= 1; };
  path = shortest_accepting_path(a, q);
  CHECK_EQ(path.size(), size_t{2});
  CHECK_EQ(a.state_name[path[0].edge.from], "q0");
  CHECK_EQ(a.state_name[path[0].edge.to], "q1");
  CHECK_EQ(path[0].edge.goal, "p1");
  CHECK_EQ(a.state_name[path[1].edge.from], "q1");
  CHECK_EQ(a.state_name[path[1].edge.to], "qf");
  CHECK_EQ(path[1].edge.goal, "p2");
  CHECK_NEAR(path[0].weight + path[1].weight, 2.0, 0.0);
}

TEST(automaton, shortest_path_weights_decide) {
  Automaton a = two_goal_fsa();
  int q0 = a.state_by_name("q0");
  int qf = a.state_by_name("qf");
  // price the direct jump above the two-leg route; Dijkstra must switch
  PathQuery q;
  q.weight = [&](const Edge& e, const Vec& from, Vec& after) {
    after = from;
    return (e.from == q0 && e.to == qf) ? 3.0 : 1.0;
  };
  auto path = shortest_accepting_path(a, q);
  CHECK_EQ(path.size(), size_t{2});
  double total = 0.0;
  for (const auto& s : path) total += s.weight;
  CHECK_NEAR(total, 2.0, 0.0);

  PathQuery neg;
  neg.weight = [](const Edge&, const Vec& from, Vec& after) {
    after = from;
    return -1.0;
  };
  CHECK_THROWS_EX(shortest_accepting_path(a, neg), Error, e.code() == ErrorCode::InvalidInput);
}

TEST(automaton, shortest_path_deterministic_tie_break) {
  Automaton a = build_fsa(ltl::parse_formula("F p | F q"), {"p", "q"});
  auto path = shortest_accepting_path(a);
  CHECK_EQ(path.size(), size_t{1});
  CHECK_EQ(path[0].edge.val, 1u);  // smallest winning valuation
  CHECK_EQ(path[0].edge.goal, "p");
}

TEST(automaton, no_accepting_path) {
  // "F p" whose only discharging valuation is pruned away
  Automaton a = build_fsa(ltl::parse_formula("F p"));
  PathQuery q;
  q.feasible = [](unsigned val) { return val == 0; };
  CHECK_THROWS_EX(shortest_accepting_path(a, q), Error,
                  e.code() == ErrorCode::NoAcceptingPath);
}

namespace {

struct DecompFixture {
  Automaton a;
  std::vector<PathStep> path;
  ltl::PredicateTable preds;
  ltl::Formula phi_s;
  ltl::TrajectoryTable refs;

  DecompFixture() : a(two_goal_fsa()), phi_s(ltl::parse_formula("G p3")) {
    preds["p1"] = ltl::TrackBall{"orbit", 0.6};
    preds["p2"] = ltl::TrackBall{"park", 0.6};
    Box box;
    box.A = Mat::Identity(2, 2);
    box.r = Vec::Zero(2);
    box.c = Vec::Constant(2, -30.0);
    box.C = Vec::Constant(2, 30.0);
    preds["p3"] = ltl::BoxMembership{box};
    refs["orbit"] = [](double t) {
      Vec z(2);
      z << 0.5 * std::sin(0.5 * t), 0.5 * std::cos(0.5 * t);
      return z;
    };
    refs["park"] = [](double) {
      Vec z(2);
      z << 3.0, 3.0;
      return z;
    };
    PathQuery q;
    q.feasible = [this](unsigned val) { return __builtin_popcount(val) <= 1; };
    path = shortest_accepting_path(a, q);
  }
};

}  // namespace

TEST(automaton, decompose_two_goals) {
  DecompFixture fx;
  Decomposition d = decompose(fx.a, fx.path, fx.preds, fx.phi_s, fx.refs);
  CHECK_EQ(d.subproblems.size(), size_t{3});
  CHECK(d.warnings.empty());

  const SubProblem& s0 = d.subproblems[0];
  CHECK_EQ(s0.index, 0);
  CHECK(!s0.hold);
  CHECK_EQ(s0.goal_atom, "p1");
  CHECK_EQ(s0.goal.trajectory, "orbit");
  CHECK_NEAR(s0.goal.eps, 0.6, 0.0);
  CHECK_EQ(s0.entry, "x0");
  CHECK_EQ(s0.safety_encoding, "!p2 & p3");
  CHECK_EQ(s0.forbidden.size(), size_t{1});
  CHECK_EQ(s0.forbidden[0], "p2");

  const SubProblem& s1 = d.subproblems[1];
  CHECK(!s1.hold);
  CHECK_EQ(s1.goal_atom, "p2");
  CHECK_EQ(s1.entry, "p1");
  CHECK_EQ(s1.safety_encoding, "p3");
  CHECK(s1.forbidden.empty());

  const SubProblem& hold = d.subproblems[2];
  CHECK(hold.hold);
  CHECK_EQ(hold.index, 2);
  CHECK_EQ(hold.entry, "p2");
  CHECK_EQ(hold.safety_encoding, "p3");

  // every sub-problem carries the phi_s polytope as its safety region
  for (const auto& sp : d.subproblems) {
    CHECK_EQ(sp.safety.rows(), 2);
    CHECK_NEAR(sp.safety.c(0), -30.0, 0.0);
    CHECK_NEAR(sp.safety.C(1), 30.0, 0.0);
  }
}

TEST(automaton, decompose_errors_and_warnings) {
  DecompFixture fx;

  // phi_s must be G <atom> over a box predicate
  CHECK_THROWS_EX(decompose(fx.a, fx.path, fx.preds, ltl::parse_formula("G p3 & G p3"), fx.refs),
                  Error, e.code() == ErrorCode::Decomposition);
  {
    auto preds = fx.preds;
    preds["p3"] = ltl::TrackBall{"orbit", 1.0};
    CHECK_THROWS_EX(decompose(fx.a, fx.path, preds, fx.phi_s, fx.refs), Error,
                    e.code() == ErrorCode::Decomposition);
  }

  // a goal reference that exits the polytope is rejected up front
  {
    auto refs = fx.refs;
    refs["park"] = [](double) {
      Vec z(2);
      z << 40.0, 0.0;
      return z;
    };
    CHECK_THROWS_EX(decompose(fx.a, fx.path, fx.preds, fx.phi_s, refs), Error,
                    e.code() == ErrorCode::Decomposition);
  }

  // an edge with no goal predicate cannot be turned into a tracking segment
  {
    auto path = fx.path;
    path[0].edge.goal = "";
    CHECK_THROWS_EX(decompose(fx.a, path, fx.preds, fx.phi_s, fx.refs), Error,
                    e.code() == ErrorCode::Decomposition);
  }

  // two predicates naming the same trajectory only warns
  {
    auto preds = fx.preds;
    preds["p4"] = ltl::TrackBall{"orbit", 0.3};
    Decomposition d = decompose(fx.a, fx.path, preds, fx.phi_s, fx.refs);
    CHECK_EQ(d.warnings.size(), size_t{1});
    CHECK(d.warnings[0].find("orbit") != std::string::npos);
  }
}
