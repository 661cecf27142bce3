#include "tltrack/automaton.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "tltrack/errors.hpp"

namespace tlt::automaton {

unsigned Automaton::encode(const ltl::Valuation& v) const {
  unsigned mask = 0;
  for (size_t i = 0; i < atoms.size(); ++i) {
    auto it = v.find(atoms[i]);
    if (it == v.end()) throw input_error("valuation does not assign atom '" + atoms[i] + "'");
    if (it->second) mask |= 1u << i;
  }
  return mask;
}

ltl::Valuation Automaton::decode(unsigned val) const {
  ltl::Valuation v;
  for (size_t i = 0; i < atoms.size(); ++i) v[atoms[i]] = (val >> i) & 1u;
  return v;
}

int Automaton::state_by_name(const std::string& name) const {
  for (int i = 0; i < num_states(); ++i) {
    if (state_name[i] == name) return i;
  }
  throw input_error("no automaton state named '" + name + "'");
}

Automaton build_fsa(const ltl::Formula& f, std::vector<std::string> atom_order, int state_cap) {
  if (!ltl::is_co_safe(f)) {
    throw input_error("build_fsa requires a co-safe formula, got '" + ltl::to_string(f) + "'");
  }
  Automaton a;
  a.phi = f;
  a.atoms = atom_order.empty() ? ltl::atoms(f) : std::move(atom_order);
  {
    // the formula's atoms must all be covered by the valuation alphabet
    std::vector<std::string> need = ltl::atoms(f);
    for (const std::string& at : need) {
      if (std::find(a.atoms.begin(), a.atoms.end(), at) == a.atoms.end()) {
        throw input_error("atom_order is missing formula atom '" + at + "'");
      }
    }
  }
  if (a.atoms.size() > 8) {
    throw input_error("build_fsa supports at most 8 atoms, got " + std::to_string(a.atoms.size()));
  }
  const int nvals = 1 << static_cast<int>(a.atoms.size());

  std::map<std::string, int> index;  // canonical rendering -> state id
  auto intern = [&](const ltl::Formula& g) {
    std::string key = ltl::to_string(g);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(a.state_formula.size());
    if (id >= state_cap) {
      throw Error(ErrorCode::StateCapExceeded,
                  "automaton construction exceeded the cap of " + std::to_string(state_cap) +
                      " states");
    }
    index.emplace(std::move(key), id);
    a.state_formula.push_back(g);
    return id;
  };

  a.initial = intern(ltl::simplify(f));
  // breadth-first closure in valuation order keeps state ids deterministic
  for (size_t q = 0; q < a.state_formula.size(); ++q) {
    a.table.resize((q + 1) * nvals, -1);
    ltl::Formula from = a.state_formula[q];  // copy: intern may reallocate the vector
    for (int val = 0; val < nvals; ++val) {
      ltl::Formula succ = ltl::progress(from, a.decode(static_cast<unsigned>(val)));
      a.table[q * nvals + val] = intern(succ);
    }
  }

  int next_q = 0;
  a.state_name.resize(a.state_formula.size());
  for (int i = 0; i < a.num_states(); ++i) {
    if (a.state_formula[i].is_true()) {
      a.accepting.insert(i);
      a.state_name[i] = i == a.initial ? "q0" : "qf";
    } else if (a.state_formula[i].is_false()) {
      a.rejecting.insert(i);
      a.state_name[i] = i == a.initial ? "q0" : "reject";
    } else {
      a.state_name[i] = "q" + std::to_string(next_q++);
    }
  }
  return a;
}

MonitorStep monitor_step(const Automaton& a, int q, const ltl::Valuation& v) {
  if (q < 0 || q >= a.num_states()) throw input_error("monitor_step: state out of range");
  int nq = a.step(q, a.encode(v));
  return MonitorStep{nq, a.is_accepting(nq), a.is_rejecting(nq)};
}

std::vector<PathStep> shortest_accepting_path(const Automaton& a, const PathQuery& q) {
  auto feasible = q.feasible ? q.feasible : [](unsigned) { return true; };
  auto goal_of = q.goal_of;
  if (!goal_of) {
    goal_of = [&a](unsigned val) -> std::string {
      if (val != 0 && (val & (val - 1)) == 0) {
        int bit = 0;
        while (!((val >> bit) & 1u)) ++bit;
        return a.atoms[bit];
      }
      return {};
    };
  }
  auto weight = q.weight;
  if (!weight) {
    weight = [](const Edge&, const Vec& from_pos, Vec& pos_after) {
      pos_after = from_pos;
      return 1.0;
    };
  }

  if (a.is_accepting(a.initial)) return {};

  const int nvals = a.num_vals();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(a.num_states(), inf);
  std::vector<Edge> via(a.num_states());
  std::vector<int> parent(a.num_states(), -1);
  std::vector<Vec> pos(a.num_states());
  std::vector<char> settled(a.num_states(), 0);

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[a.initial] = 0.0;
  pos[a.initial] = q.start_pos;
  heap.push({0.0, a.initial});

  int goal_state = -1;
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (settled[u] || d > dist[u]) continue;
    settled[u] = 1;
    if (a.is_accepting(u)) {
      goal_state = u;
      break;
    }
    for (int val = 0; val < nvals; ++val) {
      if (!feasible(static_cast<unsigned>(val))) continue;
      int v = a.step(u, static_cast<unsigned>(val));
      if (v == u || a.is_rejecting(v) || settled[v]) continue;
      Edge e{u, v, static_cast<unsigned>(val), goal_of(static_cast<unsigned>(val))};
      Vec pos_after;
      double w = weight(e, pos[u], pos_after);
      if (w < 0) throw input_error("negative edge weight in shortest_accepting_path");
      double nd = dist[u] + w;
      bool better = nd < dist[v];
      if (!better && nd == dist[v] && parent[v] >= 0) {
        // deterministic tie-break: prefer the smaller parent, then valuation
        better = std::make_pair(u, e.val) < std::make_pair(parent[v], via[v].val);
      }
      if (better) {
        dist[v] = nd;
        via[v] = e;
        parent[v] = u;
        pos[v] = pos_after;
        heap.push({nd, v});
      }
    }
  }
  if (goal_state < 0) {
    throw Error(ErrorCode::NoAcceptingPath,
                "no accepting state is reachable from '" + a.state_name[a.initial] + "'");
  }

  std::vector<PathStep> path;
  for (int v = goal_state; parent[v] >= 0; v = parent[v]) {
    path.push_back(PathStep{via[v], dist[v] - dist[parent[v]]});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Decomposition decompose(const Automaton& a, const std::vector<PathStep>& path,
                        const ltl::PredicateTable& preds, const ltl::Formula& phi_s,
                        const ltl::TrajectoryTable& refs, const DecomposeOptions& opt) {
  if (phi_s.kind != ltl::Kind::Always || phi_s.children[0].kind != ltl::Kind::Atom) {
    throw Error(ErrorCode::Decomposition,
                "phi_s must have the form 'G <atom>' with a box predicate, got '" +
                    ltl::to_string(phi_s) + "'");
  }
  const std::string box_atom = phi_s.children[0].atom;
  auto bit = preds.find(box_atom);
  if (bit == preds.end() || !std::holds_alternative<ltl::BoxMembership>(bit->second)) {
    throw Error(ErrorCode::Decomposition,
                "phi_s atom '" + box_atom + "' is not a box membership predicate");
  }
  const Box& safety = std::get<ltl::BoxMembership>(bit->second).box;

  Decomposition out;
  {
    std::map<std::string, std::string> traj_user;  // trajectory id -> first predicate
    for (const auto& [name, p] : preds) {
      if (!std::holds_alternative<ltl::TrackBall>(p)) continue;
      const auto& tb = std::get<ltl::TrackBall>(p);
      auto [it, fresh] = traj_user.emplace(tb.trajectory, name);
      if (!fresh) {
        out.warnings.push_back("predicates '" + it->second + "' and '" + name +
                               "' share trajectory '" + tb.trajectory + "'");
      }
    }
  }

  auto forbidden_atoms = [&](int state, const std::string& goal) {
    std::vector<std::string> bad;
    for (size_t i = 0; i < a.atoms.size(); ++i) {
      if (a.atoms[i] == goal) continue;
      if (a.is_rejecting(a.step(state, 1u << i))) bad.push_back(a.atoms[i]);
    }
    return bad;
  };

  auto encoding = [&](const std::vector<std::string>& forbidden) {
    std::string enc;
    for (const std::string& b : forbidden) enc += "!" + b + " & ";
    enc += box_atom;
    return enc;
  };

  std::string entry = "x0";
  for (size_t k = 0; k < path.size(); ++k) {
    const Edge& e = path[k].edge;
    if (e.goal.empty()) {
      throw Error(ErrorCode::Decomposition,
                  "path edge " + a.state_name[e.from] + " -> " + a.state_name[e.to] +
                      " has no goal predicate; it cannot be executed as a tracking sub-problem");
    }
    auto pit = preds.find(e.goal);
    if (pit == preds.end() || !std::holds_alternative<ltl::TrackBall>(pit->second)) {
      throw Error(ErrorCode::Decomposition,
                  "edge goal '" + e.goal + "' has no TrackBall definition");
    }
    const auto& tb = std::get<ltl::TrackBall>(pit->second);
    auto rit = refs.find(tb.trajectory);
    if (rit == refs.end()) {
      throw Error(ErrorCode::Decomposition, "unknown trajectory id '" + tb.trajectory + "'");
    }
    for (int i = 0; i <= opt.validation_samples; ++i) {
      double t = opt.validation_horizon * i / opt.validation_samples;
      if (!safety.contains(rit->second(t), true)) {
        throw Error(ErrorCode::Decomposition,
                    "goal trajectory '" + tb.trajectory +
                        "' leaves the safety polytope at t=" + std::to_string(t));
      }
    }

    SubProblem sp;
    sp.index = static_cast<int>(k);
    sp.goal_atom = e.goal;
    sp.goal = tb;
    sp.safety = safety;
    sp.forbidden = forbidden_atoms(e.from, e.goal);
    sp.entry = entry;
    sp.safety_encoding = encoding(sp.forbidden);
    out.subproblems.push_back(std::move(sp));
    entry = e.goal;
  }

  SubProblem hold;
  hold.index = static_cast<int>(path.size());
  hold.hold = true;
  hold.safety = safety;
  if (!path.empty()) {
    hold.forbidden = forbidden_atoms(path.back().edge.to, "");
  } else if (!a.is_accepting(a.initial)) {
    throw Error(ErrorCode::Decomposition, "empty path but the initial state does not accept");
  }
  hold.entry = entry;
  hold.safety_encoding = encoding(hold.forbidden);
  out.subproblems.push_back(std::move(hold));
  return out;
}

}  // namespace tlt::automaton
