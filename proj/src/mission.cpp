#include "tltrack/mission.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "tltrack/errors.hpp"
#include "tltrack/expr.hpp"
#include "tltrack/version.hpp"

namespace tlt::mission {

namespace {

Vec to_vec(const json& j, const std::string& what) {
  if (!j.is_array()) throw input_error(what + " must be an array of numbers");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw input_error(what + "[" + std::to_string(i) + "] is not a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Mat to_mat(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw input_error(what + " must be an array of rows");
  size_t cols = j[0].size();
  Mat m(j.size(), cols);
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw input_error(what + " rows have inconsistent lengths");
    for (size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

std::vector<std::string> state_vars(int n, const std::string& stem) {
  std::vector<std::string> v;
  for (int i = 0; i < n; ++i) v.push_back(stem + std::to_string(i + 1));
  return v;
}

plant::Plant parse_plant(const json& j) {
  if (!j.is_object()) throw input_error("'plant' must be an object");
  if (j.contains("builtin")) {
    std::string b = j.at("builtin").get<std::string>();
    if (b == "nl2d") return plant::builtin_nl2d();
    throw input_error("unknown builtin plant '" + b + "'");
  }
  int n = j.at("n").get<int>();
  int m_u = j.at("m").get<int>();
  if (n <= 0 || m_u <= 0) throw input_error("plant dimensions must be positive");
  auto fj = j.at("f");
  if (!fj.is_array() || static_cast<int>(fj.size()) != n)
    throw input_error("plant.f must list n expressions");
  auto vars = state_vars(n, "x");
  std::vector<std::string> fex;
  for (auto& e : fj) fex.push_back(e.get<std::string>());
  expr::VectorField f(fex, vars);

  auto gj = j.at("g");
  if (!gj.is_array() || static_cast<int>(gj.size()) != n)
    throw input_error("plant.g must be an n x m array of expressions");
  std::vector<std::vector<expr::Compiled>> g_rows;
  for (auto& rowj : gj) {
    if (!rowj.is_array() || static_cast<int>(rowj.size()) != m_u)
      throw input_error("plant.g rows must each list m expressions");
    std::vector<expr::Compiled> row;
    for (auto& e : rowj) row.push_back(expr::compile(e.get<std::string>(), vars));
    g_rows.push_back(std::move(row));
  }

  plant::Plant p;
  p.id = j.value("id", std::string("custom"));
  p.dyn.n = n;
  p.dyn.m_u = m_u;
  p.dyn.f = [f](const Vec& x) { return f(x); };
  p.dyn.g = [g_rows, n, m_u](const Vec& x) {
    std::vector<double> slots(x.data(), x.data() + x.size());
    Mat g(n, m_u);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < m_u; ++k) g(i, k) = g_rows[i][k].eval(slots);
    return g;
  };
  return p;
}

plant::Exosystem parse_exosystem(const std::string& id, const json& j, int n) {
  if (!j.is_object()) throw input_error("trajectory '" + id + "' must be an object");
  plant::Exosystem exo;
  if (j.contains("builtin")) {
    std::string b = j.at("builtin").get<std::string>();
    if (b == "circle") {
      exo = plant::builtin_circle(j.value("radius", 0.5), j.value("omega", 0.5));
    } else if (b == "static") {
      exo = plant::builtin_static(to_vec(j.at("point"), "trajectory '" + id + "'.point"));
    } else {
      throw input_error("unknown builtin trajectory '" + b + "'");
    }
  } else {
    if (!j.contains("h") && !j.contains("z"))
      throw input_error("trajectory '" + id + "' needs 'builtin', 'h', or 'z'");
    int dim = -1;
    if (j.contains("h")) {
      auto hj = j.at("h");
      dim = static_cast<int>(hj.size());
      auto vars = state_vars(dim, "z");
      std::vector<std::string> hex;
      for (auto& e : hj) hex.push_back(e.get<std::string>());
      expr::VectorField h(hex, vars);
      exo.h = [h](const Vec& z) { return h(z); };
      if (!j.contains("z0") && !j.contains("z"))
        throw input_error("trajectory '" + id + "' with 'h' needs 'z0' or a closed form 'z'");
    }
    if (j.contains("z")) {
      auto zj = j.at("z");
      if (dim >= 0 && static_cast<int>(zj.size()) != dim)
        throw input_error("trajectory '" + id + "': 'z' and 'h' disagree on dimension");
      dim = static_cast<int>(zj.size());
      std::vector<std::string> zex;
      for (auto& e : zj) zex.push_back(e.get<std::string>());
      expr::VectorField zf(zex, {"t"});
      exo.z_closed = [zf](double t) {
        Vec tv(1);
        tv(0) = t;
        return zf(tv);
      };
    }
    if (j.contains("z0")) exo.z0 = to_vec(j.at("z0"), "trajectory '" + id + "'.z0");
    if (exo.has_closed() && exo.z0.size() == 0) exo.z0 = exo.z_closed(0.0);
    exo.dim = dim;
  }
  exo.id = id;
  if (exo.dim != n)
    throw input_error("trajectory '" + id + "' has dimension " + std::to_string(exo.dim) +
                      " but the plant state has dimension " + std::to_string(n));
  return exo;
}

ltl::Predicate parse_predicate(const std::string& name, const json& j, int n) {
  if (!j.is_object() || !j.contains("type"))
    throw input_error("predicate '" + name + "' must be an object with a 'type'");
  std::string type = j.at("type").get<std::string>();
  if (type == "track_ball") {
    ltl::TrackBall tb;
    tb.trajectory = j.at("trajectory").get<std::string>();
    tb.eps = j.at("eps").get<double>();
    if (!(tb.eps > 0)) throw input_error("predicate '" + name + "': eps must be positive");
    return tb;
  }
  if (type == "box") {
    ltl::BoxMembership bm;
    bm.box.c = to_vec(j.at("c"), "predicate '" + name + "'.c");
    bm.box.C = to_vec(j.at("C"), "predicate '" + name + "'.C");
    int rows = static_cast<int>(bm.box.c.size());
    bm.box.A = j.contains("A") ? to_mat(j.at("A"), "predicate '" + name + "'.A")
                               : Mat(Mat::Identity(rows, n));
    bm.box.r = j.contains("r") ? to_vec(j.at("r"), "predicate '" + name + "'.r")
                               : Vec(Vec::Zero(rows));
    if (bm.box.A.rows() != rows || bm.box.r.size() != rows || bm.box.C.size() != rows)
      throw input_error("predicate '" + name + "': A, r, c, C row counts disagree");
    if (bm.box.A.cols() != n)
      throw input_error("predicate '" + name + "': A must have one column per state dimension");
    for (int i = 0; i < rows; ++i)
      if (!(bm.box.c(i) < bm.box.C(i)))
        throw input_error("predicate '" + name + "': needs c < C elementwise");
    return bm;
  }
  throw input_error("predicate '" + name + "': unknown type '" + type + "'");
}

std::string safety_atom_of(const ltl::Formula& phi_s) {
  if (phi_s.kind == ltl::Kind::Always && phi_s.children.size() == 1 &&
      phi_s.children[0].kind == ltl::Kind::Atom)
    return phi_s.children[0].atom;
  return "";
}

}  // namespace

Mission load_mission_text(const std::string& text, const std::string& name_hint) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw input_error(std::string("mission file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw input_error("mission file must hold a JSON object");

  Mission m;
  m.name = j.value("name", name_hint);
  if (!j.contains("phi_c")) throw input_error("mission is missing 'phi_c'");
  if (!j.contains("phi_s")) throw input_error("mission is missing 'phi_s' (the safety formula)");
  m.phi_c_text = j.at("phi_c").get<std::string>();
  m.phi_s_text = j.at("phi_s").get<std::string>();
  m.phi_c = ltl::parse_co_safe(m.phi_c_text);
  m.phi_s = ltl::parse_safe(m.phi_s_text);

  m.plant = parse_plant(j.at("plant"));
  const int n = m.plant.n();

  m.x0 = to_vec(j.at("x0"), "x0");
  if (m.x0.size() != n) throw input_error("x0 does not match the plant state dimension");

  if (j.contains("trajectories")) {
    for (auto& [id, tj] : j.at("trajectories").items())
      m.exosystems.emplace(id, parse_exosystem(id, tj, n));
  }
  if (!j.contains("predicates") || !j.at("predicates").is_object())
    throw input_error("mission is missing the 'predicates' table");
  for (auto& [name, pj] : j.at("predicates").items())
    m.predicates.emplace(name, parse_predicate(name, pj, n));

  for (const auto& [name, pred] : m.predicates)
    if (auto* tb = std::get_if<ltl::TrackBall>(&pred))
      if (!m.exosystems.count(tb->trajectory))
        throw input_error("predicate '" + name + "' references unknown trajectory '" +
                          tb->trajectory + "'");

  for (const auto& atom : ltl::atoms(m.phi_c))
    if (!m.predicates.count(atom))
      throw input_error("phi_c uses atom '" + atom + "' with no predicate definition");
  for (const auto& atom : ltl::atoms(m.phi_s))
    if (!m.predicates.count(atom))
      throw input_error("phi_s uses atom '" + atom + "' with no predicate definition");

  if (j.contains("edge_weights")) {
    for (auto& [key, wj] : j.at("edge_weights").items()) {
      double w = wj.get<double>();
      if (!(w >= 0) || !std::isfinite(w))
        throw input_error("edge weight '" + key + "' must be finite and non-negative");
      m.edge_weights[key] = w;
    }
  }
  return m;
}

Mission load_mission_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open mission file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  if (dot != std::string::npos) base = base.substr(0, dot);
  return load_mission_text(ss.str(), base);
}

Plan plan_mission(const Mission& m, const engine::SimConfig& cfg) {
  Plan p;
  p.fsa = automaton::build_fsa(m.phi_c, {}, cfg.state_cap);

  ltl::TrajectoryTable refs;
  for (const auto& [id, exo] : m.exosystems) refs[id] = engine::make_trajectory_fn(exo, cfg.dt);

  auto track_of = [&m](const std::string& atom) -> const ltl::TrackBall* {
    auto it = m.predicates.find(atom);
    if (it == m.predicates.end()) return nullptr;
    return std::get_if<ltl::TrackBall>(&it->second);
  };
  const std::string safe_atom = safety_atom_of(m.phi_s);

  automaton::PathQuery q;
  q.start_pos = m.x0;
  // Tracking goals are treated as mutually exclusive regions: a valuation
  // asserting two of them at once is unreachable. The safety atom can never
  // be false on a run we would accept.
  q.feasible = [&p, &track_of, safe_atom](unsigned val) {
    int track_true = 0;
    for (size_t i = 0; i < p.fsa.atoms.size(); ++i) {
      bool bit = (val >> i) & 1u;
      if (bit && track_of(p.fsa.atoms[i])) ++track_true;
      if (!bit && p.fsa.atoms[i] == safe_atom) return false;
    }
    return track_true <= 1;
  };
  q.goal_of = [&p, &track_of](unsigned val) -> std::string {
    std::string goal;
    for (size_t i = 0; i < p.fsa.atoms.size(); ++i)
      if (((val >> i) & 1u) && track_of(p.fsa.atoms[i])) {
        if (!goal.empty()) return "";
        goal = p.fsa.atoms[i];
      }
    return goal;
  };
  // Edges are priced by the distance from the position settled so far to the
  // goal trajectory's position at t=0; mission overrides are absolute.
  q.weight = [&p, &m, &refs, &track_of](const automaton::Edge& e, const Vec& from,
                                        Vec& after) -> double {
    double w = 1.0;
    after = from;
    if (const auto* tb = e.goal.empty() ? nullptr : track_of(e.goal)) {
      after = refs.at(tb->trajectory)(0.0);
      w = (after - from).norm();
    }
    auto key = p.fsa.state_name[e.from] + "->" + p.fsa.state_name[e.to];
    auto it = m.edge_weights.find(key);
    if (it != m.edge_weights.end()) w = it->second;
    return w;
  };

  p.path = automaton::shortest_accepting_path(p.fsa, q);

  automaton::DecomposeOptions opt;
  opt.validation_horizon = cfg.horizon;
  p.decomp = automaton::decompose(p.fsa, p.path, m.predicates, m.phi_s, refs, opt);
  return p;
}

json plan_to_json(const Mission& m, const Plan& p) {
  json out;
  out["mission"] = m.name;
  out["phi_c"] = m.phi_c_text;
  out["phi_s"] = m.phi_s_text;

  const auto& a = p.fsa;
  json fsa;
  fsa["atoms"] = a.atoms;
  fsa["num_states"] = a.num_states();
  json states = json::array();
  for (int s = 0; s < a.num_states(); ++s) {
    states.push_back({{"id", s},
                      {"name", a.state_name[s]},
                      {"formula", ltl::to_string(a.state_formula[s])},
                      {"accepting", a.is_accepting(s)},
                      {"rejecting", a.is_rejecting(s)}});
  }
  fsa["states"] = states;
  json edges = json::array();
  for (int s = 0; s < a.num_states(); ++s) {
    if (a.is_accepting(s) || a.is_rejecting(s)) continue;
    for (int v = 0; v < a.num_vals(); ++v) {
      int to = a.step(s, static_cast<unsigned>(v));
      if (to == s) continue;
      json lbl;
      for (const auto& [name, bit] : a.decode(static_cast<unsigned>(v))) lbl[name] = bit;
      edges.push_back({{"from", a.state_name[s]}, {"to", a.state_name[to]}, {"when", lbl}});
    }
  }
  fsa["edges"] = edges;
  out["automaton"] = fsa;

  json path = json::array();
  std::vector<std::string> path_states{a.state_name[a.initial]};
  for (const auto& step : p.path) {
    json lbl;
    for (const auto& [name, bit] : a.decode(step.edge.val)) lbl[name] = bit;
    path.push_back({{"from", a.state_name[step.edge.from]},
                    {"to", a.state_name[step.edge.to]},
                    {"goal", step.edge.goal},
                    {"weight", step.weight},
                    {"when", lbl}});
    path_states.push_back(a.state_name[step.edge.to]);
  }
  out["path"] = path;
  out["path_states"] = path_states;
  if (p.path.empty()) out["notice"] = "empty path: the initial automaton state is accepting";

  json subs = json::array();
  for (const auto& sp : p.decomp.subproblems) {
    json sj;
    sj["index"] = sp.index;
    sj["hold"] = sp.hold;
    sj["entry"] = sp.entry;
    sj["safety_encoding"] = sp.safety_encoding;
    sj["forbidden"] = sp.forbidden;
    if (!sp.hold) {
      sj["goal_atom"] = sp.goal_atom;
      sj["trajectory"] = sp.goal.trajectory;
      sj["eps"] = sp.goal.eps;
    }
    subs.push_back(sj);
  }
  out["subproblems"] = subs;
  out["warnings"] = p.decomp.warnings;
  return out;
}

MissionResult run_mission(const Mission& m, const Plan& p, const engine::SimConfig& cfg) {
  auto wall0 = std::chrono::steady_clock::now();
  MissionResult r;

  ltl::TrajectoryTable refs;
  for (const auto& [id, exo] : m.exosystems) refs[id] = engine::make_trajectory_fn(exo, cfg.dt);

  const int n = m.plant.n();
  const int m_u = m.plant.m_u();
  int box_rows = 0;
  for (const auto& sp : p.decomp.subproblems) box_rows = std::max(box_rows, sp.safety.rows());
  learning::PolyBasis basis_c(2 * box_rows, false);
  learning::PolyBasis basis_u(2 * box_rows, true);
  r.trace = engine::make_trace(n, box_rows, m_u, basis_c.size(), basis_u.size() * m_u);

  // The monitor consumes the valuation at t = 0 before any segment runs.
  int q = p.fsa.initial;
  ltl::Valuation v0;
  for (const auto& [name, pred] : m.predicates)
    v0[name] = ltl::eval_predicate(pred, m.x0, 0.0, refs);
  r.valuations.push_back({0.0, v0});
  auto ms = automaton::monitor_step(p.fsa, q, v0);
  q = ms.state;

  Vec x = m.x0;
  double t = 0.0;
  learning::LearnerState learner;
  bool aborted = false;

  int last_exec = -1;
  for (const auto& sp : p.decomp.subproblems)
    if (!sp.hold) last_exec = sp.index;

  if (ms.rejecting) {
    aborted = true;
    r.failure_reason = "mission monitor rejected the initial valuation";
  }

  for (const auto& sp : p.decomp.subproblems) {
    if (aborted || sp.hold) continue;
    if (p.fsa.is_accepting(q)) break;  // objective already discharged

    engine::SegmentContext ctx;
    ctx.plant = m.plant.dyn;
    ctx.goal_ref = &m.exosystems.at(sp.goal.trajectory);
    ctx.trajectories = refs;
    ctx.predicates = &m.predicates;
    ctx.monitor = &p.fsa;
    ctx.monitor_state = &q;
    ctx.valuations = &r.valuations;

    engine::SimConfig segcfg = cfg;
    segcfg.track_full_horizon = cfg.track_full_horizon && sp.index == last_exec;

    auto res = engine::run_subproblem(sp, ctx, x, t, segcfg, std::move(learner), &r.trace,
                                      /*log_initial_row=*/sp.index == 0);

    SegmentOutcome out;
    out.index = sp.index;
    out.goal_atom = sp.goal_atom;
    out.exit = res.exit;
    out.reason = res.reason;
    out.t0 = res.t0;
    out.t_end = res.t_end;
    out.stats = res.stats;
    r.segments.push_back(out);

    x = res.x_final;
    t = res.t_end;
    learner = cfg.carry_weights ? std::move(res.learner) : learning::LearnerState{};

    if (res.exit != engine::ExitKind::GoalReached) {
      aborted = true;
      r.failure_reason = "segment " + std::to_string(sp.index) + ": " + res.reason;
    }
  }

  r.total_time = t;
  r.final_fsa_state = q;
  r.learner = std::move(learner);
  r.fsa_accepting = p.fsa.is_accepting(q);
  r.replay_phi_c = ltl::satisfies_strong(r.valuations, m.phi_c);
  r.replay_phi_s = ltl::satisfies_weak(r.valuations, m.phi_s);
  r.replay_agrees = r.replay_phi_c == r.fsa_accepting;
  r.success = !aborted && r.fsa_accepting && r.replay_phi_s;
  if (r.success) r.failure_reason.clear();
  if (!r.success && r.failure_reason.empty())
    r.failure_reason = r.fsa_accepting ? "safety formula violated on replay"
                                       : "mission monitor never reached an accepting state";
  r.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  return r;
}

namespace {

json stats_to_json(const engine::SegmentStats& st) {
  json s;
  s["steps"] = st.steps;
  s["events"] = st.events;
  s["event_step_ratio"] = st.steps > 0 ? static_cast<double>(st.events) / st.steps : 0.0;
  s["min_inter_event"] = std::isfinite(st.min_inter_event) ? st.min_inter_event : -1.0;
  s["mean_inter_event"] = st.mean_inter_event;
  s["post_noise_t"] = st.post_noise_t;
  s["steps_post_noise"] = st.steps_post_noise;
  s["events_post_noise"] = st.events_post_noise;
  s["event_step_ratio_post_noise"] =
      st.steps_post_noise > 0 ? static_cast<double>(st.events_post_noise) / st.steps_post_noise
                              : 0.0;
  s["goal_time"] = st.goal_time;
  s["final_err"] = st.final_err;
  s["max_err_final_fifth"] = st.max_err_final_fifth;
  s["max_abs_state"] = st.max_abs_state;
  s["min_safety_margin"] = st.min_safety_margin;
  s["observed_policy_lipschitz"] = st.observed_policy_lipschitz;
  s["lipschitz_L"] = st.lipschitz_L;
  s["runtime_sec"] = st.runtime_sec;
  return s;
}

}  // namespace

json summary_to_json(const Mission& m, const Plan& p, const MissionResult& r,
                     const engine::SimConfig& cfg) {
  json out;
  out["format"] = "tltrack-summary v1";
  out["mission"] = m.name;
  out["phi_c"] = m.phi_c_text;
  out["phi_s"] = m.phi_s_text;
  out["success"] = r.success;
  out["verdict"] = r.success ? "satisfied" : "failed";
  out["failure_reason"] = r.failure_reason;
  out["fsa_accepting"] = r.fsa_accepting;
  out["final_fsa_state"] = p.fsa.state_name[r.final_fsa_state];
  out["replay_phi_c"] = r.replay_phi_c;
  out["replay_phi_s"] = r.replay_phi_s;
  out["replay_agrees"] = r.replay_agrees;
  out["total_time"] = r.total_time;
  out["runtime_sec"] = r.runtime_sec;
  out["seed"] = cfg.seed;
  out["config"] = config_to_json(cfg);
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(r.trace.hash()));
  out["trace_fnv1a64"] = hex;
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(config_to_json(cfg).dump())));
  out["config_fnv1a64"] = hex;
  json segs = json::array();
  for (const auto& s : r.segments) {
    json sj;
    sj["index"] = s.index;
    sj["goal_atom"] = s.goal_atom;
    sj["exit"] = engine::to_string(s.exit);
    sj["reason"] = s.reason;
    sj["t0"] = s.t0;
    sj["t_end"] = s.t_end;
    sj["stats"] = stats_to_json(s.stats);
    segs.push_back(sj);
  }
  out["segments"] = segs;
  return out;
}

json config_to_json(const engine::SimConfig& cfg) {
  json j;
  j["dt"] = cfg.dt;
  j["horizon"] = cfg.horizon;
  j["seed"] = cfg.seed;
  j["lambda"] = cfg.control.lambda;
  j["gamma1"] = cfg.control.gamma1;
  if (std::isnan(cfg.control.gamma))
    j["gamma"] = "auto";
  else
    j["gamma"] = cfg.control.gamma;
  j["beta"] = cfg.control.beta;
  if (cfg.auto_lipschitz)
    j["L"] = "auto";
  else
    j["L"] = cfg.control.L;
  if (cfg.control.Q.size() == 0) {
    j["q_scale"] = cfg.q_scale;
  } else {
    json rows = json::array();
    for (int i = 0; i < cfg.control.Q.rows(); ++i) {
      json row = json::array();
      for (int k = 0; k < cfg.control.Q.cols(); ++k) row.push_back(cfg.control.Q(i, k));
      rows.push_back(row);
    }
    j["Q"] = rows;
  }
  j["alpha"] = cfg.alpha;
  j["alpha_u"] = cfg.alpha_u;
  j["max_inter_event"] = cfg.max_inter_event;
  j["noise"] = {{"a0", cfg.noise.a0}, {"kappa", cfg.noise.kappa}, {"freqs", cfg.noise.freqs}};
  j["noise_floor"] = cfg.noise_floor;
  j["carry_weights"] = cfg.carry_weights;
  j["track_full_horizon"] = cfg.track_full_horizon;
  j["state_cap"] = cfg.state_cap;
  return j;
}

engine::SimConfig config_from_json(const json& j) {
  engine::SimConfig cfg;
  if (!j.is_object()) throw input_error("config must be a JSON object");
  static const std::set<std::string> known = {
      "dt",    "horizon", "seed",  "lambda",      "gamma1",        "gamma",
      "beta",  "L",       "Q",     "q_scale",     "alpha",         "alpha_u",
      "max_inter_event", "noise", "noise_floor", "carry_weights",
      "track_full_horizon", "state_cap"};
  for (auto& [key, val] : j.items())
    if (!known.count(key)) throw input_error("unknown config key '" + key + "'");

  cfg.dt = j.value("dt", cfg.dt);
  cfg.horizon = j.value("horizon", cfg.horizon);
  if (!(cfg.dt > 0)) throw input_error("config: dt must be positive");
  if (cfg.horizon < cfg.dt) throw input_error("config: horizon must be at least dt");
  cfg.seed = j.value("seed", cfg.seed);
  cfg.control.lambda = j.value("lambda", cfg.control.lambda);
  cfg.control.gamma1 = j.value("gamma1", cfg.control.gamma1);
  if (j.contains("gamma")) {
    if (j["gamma"].is_string()) {
      if (j["gamma"].get<std::string>() != "auto")
        throw input_error("config: gamma must be a number or \"auto\"");
      cfg.control.gamma = std::numeric_limits<double>::quiet_NaN();
    } else {
      cfg.control.gamma = j["gamma"].get<double>();
    }
  }
  cfg.control.beta = j.value("beta", cfg.control.beta);
  if (j.contains("L")) {
    if (j["L"].is_string()) {
      if (j["L"].get<std::string>() != "auto")
        throw input_error("config: L must be a number or \"auto\"");
      cfg.auto_lipschitz = true;
    } else {
      cfg.auto_lipschitz = false;
      cfg.control.L = j["L"].get<double>();
    }
  }
  if (j.contains("Q")) cfg.control.Q = to_mat(j["Q"], "config.Q");
  cfg.q_scale = j.value("q_scale", cfg.q_scale);
  cfg.alpha = j.value("alpha", cfg.alpha);
  cfg.alpha_u = j.value("alpha_u", cfg.alpha_u);
  cfg.max_inter_event = j.value("max_inter_event", cfg.max_inter_event);
  if (cfg.max_inter_event < cfg.dt)
    throw input_error("config: max_inter_event must be at least dt");
  if (j.contains("noise")) {
    const auto& nj = j["noise"];
    cfg.noise.a0 = nj.value("a0", cfg.noise.a0);
    cfg.noise.kappa = nj.value("kappa", cfg.noise.kappa);
    if (nj.contains("freqs")) cfg.noise.freqs = nj["freqs"].get<std::vector<double>>();
  }
  cfg.noise_floor = j.value("noise_floor", cfg.noise_floor);
  cfg.carry_weights = j.value("carry_weights", cfg.carry_weights);
  cfg.track_full_horizon = j.value("track_full_horizon", cfg.track_full_horizon);
  cfg.state_cap = j.value("state_cap", cfg.state_cap);
  return cfg;
}

engine::SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return config_from_json(json::parse(ss.str(), nullptr, true, /*ignore_comments=*/true));
  } catch (const json::parse_error& e) {
    throw input_error(std::string("config file is not valid JSON: ") + e.what());
  }
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json manifest_to_json(const std::string& mission_text, const engine::SimConfig& cfg,
                      const std::vector<std::string>& artifacts) {
  json j;
  j["format"] = "tltrack-manifest v1";
  j["version"] = kVersion;
  j["trace_format"] = "tltrack-trace v1";
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(mission_text)));
  j["mission_fnv1a64"] = hex;
  j["config"] = config_to_json(cfg);
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(config_to_json(cfg).dump())));
  j["config_fnv1a64"] = hex;
  j["seed"] = cfg.seed;
  j["artifacts"] = artifacts;
  return j;
}

}  // namespace tlt::mission
