#include "tltrack/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "tltrack/automaton.hpp"
#include "tltrack/barrier.hpp"
#include "tltrack/builtin.hpp"
#include "tltrack/control.hpp"
#include "tltrack/engine.hpp"
#include "tltrack/errors.hpp"
#include "tltrack/learning.hpp"
#include "tltrack/ltl.hpp"
#include "tltrack/mission.hpp"
#include "tltrack/plant.hpp"

namespace tlt::verify {

namespace {

void add(SuiteResult& r, const std::string& name, double value, const std::string& rel,
         double bound, const std::string& detail = "") {
  Check c;
  c.name = name;
  c.value = value;
  c.bound = bound;
  c.relation = rel;
  c.detail = detail;
  if (rel == "<")
    c.pass = value < bound;
  else if (rel == "<=")
    c.pass = value <= bound;
  else if (rel == ">")
    c.pass = value > bound;
  else if (rel == ">=")
    c.pass = value >= bound;
  else
    c.pass = value == bound;
  r.checks.push_back(std::move(c));
}

Box sec5_box() {
  Box b;
  b.A = Mat::Identity(2, 2);
  b.r = Vec::Zero(2);
  b.c = Vec::Constant(2, -30.0);
  b.C = Vec::Constant(2, 30.0);
  return b;
}

// Composite Simpson rule; the integrands here are smooth on the interval.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// ---------------------------------------------------------------- barrier

SuiteResult suite_barrier() {
  SuiteResult r{"barrier", {}};
  Box box = sec5_box();
  barrier::BarrierMap map(box);

  // Round trip b^{-1}(b(q)) = q on a 1000-point grid per polytope row.
  double worst_rt = 0.0;
  for (int row = 0; row < box.rows(); ++row) {
    double c0 = box.c(row), C0 = box.C(row);
    for (int i = 1; i < 1000; ++i) {
      double q = c0 + (C0 - c0) * i / 1000.0;
      double y = barrier::value(q, c0, C0);
      worst_rt = std::max(worst_rt, std::abs(barrier::inverse(y, c0, C0) - q));
    }
  }
  add(r, "roundtrip_grid", worst_rt, "<", 1e-9, "max |b^-1(b(q)) - q| over 2x999 grid points");

  // Inverse derivative against central finite differences.
  double worst_fd = 0.0;
  for (double y : {-3.0, -1.0, -0.25, 0.0, 0.25, 1.0, 3.0}) {
    double h = 1e-6;
    double fd = (barrier::inverse(y + h, -30.0, 30.0) - barrier::inverse(y - h, -30.0, 30.0)) /
                (2.0 * h);
    double an = barrier::inverse_deriv(y, -30.0, 30.0);
    worst_fd = std::max(worst_fd, std::abs(fd - an) / std::max(1.0, std::abs(an)));
  }
  add(r, "inverse_deriv_fd", worst_fd, "<", 1e-6, "vs central difference, h=1e-6");

  // to_x stays strictly interior for coordinates as large as 1e3.
  double worst_margin = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mag(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Vec s(2);
    double scale = (i % 2) ? 1e3 : std::abs(mag(rng)) * 1e3;
    s << mag(rng) * scale, mag(rng) * scale;
    Vec x = map.to_x(s);
    worst_margin = std::min(worst_margin, box.margin(x));
  }
  add(r, "interior_at_1e3", worst_margin, ">", 0.0, "min polytope margin of to_x, |s_i| <= 1e3");

  // Transformed flow against a finite difference of to_s along the plant flow.
  auto pl = plant::builtin_nl2d();
  std::uniform_real_distribution<double> xs(-25.0, 25.0), us(-4.0, 4.0);
  double worst_flow = 0.0;
  for (int i = 0; i < 100; ++i) {
    Vec x(2);
    x << xs(rng), xs(rng);
    Vec u(1);
    u << us(rng);
    Vec F;
    Mat G;
    map.flow(map.to_s(x), pl.dyn, F, G);
    Vec analytic = F + G * u;
    Vec xdot = pl.dyn.f(x) + pl.dyn.g(x) * u;
    double h = 1e-7;
    Vec fd = (map.to_s(x + h * xdot) - map.to_s(x - h * xdot)) / (2.0 * h);
    worst_flow = std::max(worst_flow, (analytic - fd).norm() / std::max(1.0, fd.norm()));
  }
  add(r, "flow_chain_rule", worst_flow, "<", 1e-5, "s-space flow vs finite difference of to_s");
  return r;
}

// ------------------------------------------------------------------- ltl

}  // namespace

LtlAgreement ltl_fsa_agreement(int max_depth, int max_nodes, int max_trace_len) {
  using namespace tlt::ltl;
  // Enumerate NNF formulas over {p, q} bounded by depth and node count.
  std::vector<std::vector<Formula>> by_depth(max_depth + 1);
  auto nodes = [](const Formula& f) {
    long n = 0;
    std::function<void(const Formula&)> rec = [&](const Formula& g) {
      ++n;
      for (const auto& c : g.children) rec(c);
    };
    rec(f);
    return n;
  };
  by_depth[0] = {f_true(), f_false(), f_atom("p"), f_atom("q"), f_neg_atom("p"), f_neg_atom("q")};
  std::set<std::string> seen;
  for (const auto& f : by_depth[0]) seen.insert(to_string(f));
  for (int d = 1; d <= max_depth; ++d) {
    std::vector<Formula> lower;
    for (int dd = 0; dd < d; ++dd)
      for (const auto& f : by_depth[dd]) lower.push_back(f);
    auto push = [&](Formula f) {
      if (nodes(f) > max_nodes) return;
      auto key = to_string(f);
      if (seen.insert(key).second) by_depth[d].push_back(std::move(f));
    };
    for (const auto& a : lower) {
      push(f_next(a));
      push(f_eventually(a));
      push(f_always(a));
      for (const auto& b : lower) {
        push(f_and({a, b}));
        push(f_or({a, b}));
        push(f_until(a, b));
      }
    }
  }

  // All valuations over {p, q}.
  std::vector<Valuation> vals;
  for (int v = 0; v < 4; ++v) vals.push_back({{"p", (v & 1) != 0}, {"q", (v & 2) != 0}});

  LtlAgreement out;
  std::vector<int> idx;
  for (int d = 0; d <= max_depth; ++d) {
    for (const auto& f : by_depth[d]) {
      if (!is_co_safe(f)) continue;
      automaton::Automaton a = automaton::build_fsa(f, {"p", "q"});
      ++out.formulas;
      // Depth-first over traces up to max_trace_len, carrying the FSA state.
      std::function<void(int, int, Trace&)> walk = [&](int q0, int len, Trace& tr) {
        for (unsigned v = 0; v < 4; ++v) {
          int q1 = a.step(q0, v);
          tr.push_back({static_cast<double>(len), vals[v]});
          ++out.traces;
          bool fsa_acc = a.is_accepting(q1);
          bool sem = satisfies_strong(tr, f);
          if (fsa_acc != sem) ++out.mismatches;
          if (len + 1 < max_trace_len) walk(q1, len + 1, tr);
          tr.pop_back();
        }
      };
      Trace tr;
      walk(a.initial, 0, tr);
    }
  }
  return out;
}

namespace {

SuiteResult suite_ltl() {
  SuiteResult r{"ltl", {}};

  // Parser round trip on representative formulas.
  std::vector<std::string> texts = {"F p2 & (!p2 U p1)", "G p3", "true",
                                    "F (p1 & X p2) | (!p1 U (p2 & p1))", "G (p1 | !p2)"};
  int rt_fail = 0;
  for (const auto& t : texts) {
    auto f = ltl::parse_formula(t);
    auto g = ltl::parse_formula(ltl::to_string(f));
    if (!(f == g)) ++rt_fail;
  }
  add(r, "parse_roundtrip", rt_fail, "==", 0, "parse(to_string(f)) == f");

  auto agree = ltl_fsa_agreement(2, 4, 3);
  add(r, "fsa_semantics_agreement", agree.mismatches, "==", 0,
      std::to_string(agree.formulas) + " co-safe formulas x " + std::to_string(agree.traces) +
          " trace prefixes");

  // The bundled two-goal mission plans to the expected three-state path.
  auto m = mission::load_mission_text(builtin::kPaperFig1Mission);
  engine::SimConfig cfg = mission::config_from_json(nlohmann::json::parse(builtin::kDefaultConfig));
  auto plan = mission::plan_mission(m, cfg);
  std::string path;
  path += plan.fsa.state_name[plan.fsa.initial];
  for (const auto& s : plan.path) path += "->" + plan.fsa.state_name[s.edge.to];
  add(r, "two_goal_path", path == "q0->q1->qf" ? 1 : 0, "==", 1, "path " + path);
  std::string encodings;
  for (const auto& sp : plan.decomp.subproblems)
    if (!sp.hold) encodings += (encodings.empty() ? "" : " ; ") + sp.safety_encoding;
  add(r, "safety_encodings", encodings == "!p2 & p3 ; p3" ? 1 : 0, "==", 1, encodings);

  // Weak/strong semantics boundary cases.
  ltl::Trace ok = {{0.0, {{"p3", true}}}, {1.0, {{"p3", true}}}};
  ltl::Trace bad = {{0.0, {{"p3", true}}}, {1.0, {{"p3", false}}}};
  bool weak_ok = ltl::satisfies_weak(ok, ltl::parse_safe("G p3")) &&
                 !ltl::satisfies_weak(bad, ltl::parse_safe("G p3"));
  ltl::Trace no_p1 = {{0.0, {{"p1", false}}}, {1.0, {{"p1", false}}}};
  ltl::Trace late_p1 = {{0.0, {{"p1", false}}}, {1.0, {{"p1", true}}}};
  bool strong_ok = !ltl::satisfies_strong(no_p1, ltl::parse_co_safe("F p1")) &&
                   ltl::satisfies_strong(late_p1, ltl::parse_co_safe("F p1"));
  add(r, "weak_strong_semantics", weak_ok && strong_ok ? 1 : 0, "==", 1);
  return r;
}

// ---------------------------------------------------------------- trigger

SuiteResult suite_trigger() {
  SuiteResult r{"trigger", {}};
  control::ControlConfig cc;
  cc.lambda = 5.0;
  cc.gamma1 = 1.0;
  cc.gamma = 0.01;
  cc.beta = 0.5;
  cc.L = 10.0;
  cc.Q = 800.0 * Mat::Identity(2, 2);
  const double lam_min = 800.0;

  // Hand-computed threshold: (0.5 - beta^2) lambda_min(Q) = 0.4 * L^2 lambda gamma1,
  // so threshold = 0.4 ||e_s||^2 + R(u) / 500.
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> es(-3.0, 3.0), us(-4.9, 4.9);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    Vec e(2), u(1), et(4);
    e << es(rng), es(rng);
    u << us(rng);
    et.setZero();
    auto td = control::trigger_check(et, e, u, cc, lam_min);
    double hand = 0.4 * e.squaredNorm() + control::penalty(u, cc.lambda, cc.gamma1) / 500.0;
    worst = std::max(worst, std::abs(td.threshold - hand) / std::max(1.0, std::abs(hand)));
  }
  add(r, "threshold_hand_value", worst, "<", 1e-12, "vs 0.4||e_s||^2 + R(u)/500");

  // Firing flips exactly at the threshold.
  Vec e(2), u(1);
  e << 1.0, -2.0;
  u << 3.0;
  Vec probe(4);
  probe.setZero();
  double thr = control::trigger_check(probe, e, u, cc, lam_min).threshold;
  Vec above(4), below(4);
  above.setZero();
  below.setZero();
  above(0) = std::sqrt(thr) * (1.0 + 1e-9);
  below(0) = std::sqrt(thr) * (1.0 - 1e-9);
  bool flip = control::trigger_check(above, e, u, cc, lam_min).fire &&
              !control::trigger_check(below, e, u, cc, lam_min).fire;
  add(r, "fire_boundary", flip ? 1 : 0, "==", 1, "fire iff ||e_trig||^2 > threshold");

  // Penalty equals the integral of its defining integrand.
  double worst_q = 0.0;
  for (double uu : {0.3, 1.0, 2.5, 4.0, 4.9}) {
    Vec uv(1);
    uv << uu;
    double closed = control::penalty(uv, cc.lambda, cc.gamma1);
    double quad = simpson(
        [&](double v) { return cc.gamma1 * cc.lambda * std::atanh(v / cc.lambda); }, 0.0, uu,
        4000);
    worst_q = std::max(worst_q, std::abs(closed - quad));
  }
  add(r, "penalty_quadrature", worst_q, "<", 1e-9, "R(u) vs Simpson of gamma1*lambda*atanh(v/lambda)");

  // Saturation limit value: R -> gamma1 lambda^2 ln 2 at the input bound.
  Vec ulim(1);
  ulim << cc.lambda * (1.0 - 1e-12);
  double lim = cc.gamma1 * cc.lambda * cc.lambda * std::log(2.0);
  add(r, "penalty_limit", std::abs(control::penalty(ulim, cc.lambda, cc.gamma1) - lim), "<", 1e-8,
      "R(lambda(1-1e-12)) vs gamma1 lambda^2 ln 2");

  // The saturated policy never leaves the open input box.
  std::uniform_real_distribution<double> gs(-50.0, 50.0);
  double max_u = 0.0;
  for (int i = 0; i < 10000; ++i) {
    Mat G(4, 1);
    Vec gv(4);
    for (int k = 0; k < 4; ++k) {
      G(k, 0) = gs(rng);
      gv(k) = gs(rng) * 100.0;  // deliberately huge gradients
    }
    Vec uu = control::saturated_policy(G, gv, cc.lambda, cc.gamma1);
    max_u = std::max(max_u, uu.lpNorm<Eigen::Infinity>());
  }
  add(r, "policy_saturation", max_u, "<", cc.lambda, "10^4 random evaluations, ||u||_inf");
  return r;
}

// --------------------------------------------------------------- learning

SuiteResult suite_learning() {
  SuiteResult r{"learning", {}};

  // Shared scaffolding: the bundled plant in the +-30 box tracking the circle.
  Box box = sec5_box();
  barrier::BarrierMap map(box);
  auto pl = plant::builtin_nl2d();
  auto exo = plant::builtin_circle();
  auto zfn = engine::make_trajectory_fn(exo);
  barrier::TransformedReference ref(map, zfn, exo.h);
  plant::AugmentedSystem aug(map, pl.dyn, ref);
  learning::PolyBasis basis_c(4, false), basis_u(4, true);
  control::ControlConfig cc;
  cc.Q = 800.0 * Mat::Identity(2, 2);

  // The Bellman residual equals the Hamiltonian plus half the input penalty
  // (r_hat carries R(u) where the Hamiltonian integrand carries R(u)/2... the
  // residual identity is e_c = H + R(u)/2 with H built from the critic grad).
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ss(-2.0, 2.0), us(-4.5, 4.5), ws(0.0, 1.0);
  double worst_id = 0.0;
  for (int i = 0; i < 200; ++i) {
    Vec sa(4), u(1), th(basis_c.size());
    for (int k = 0; k < 4; ++k) sa(k) = ss(rng);
    u << us(rng);
    for (int k = 0; k < th.size(); ++k) th(k) = ws(rng);
    auto res = learning::bellman_residual(th, basis_c, sa, u, aug, cc);
    auto cv = learning::critic_value(th, basis_c, sa);
    double H = control::hamiltonian(sa, u, cv.V, cv.grad, aug, cc);
    double want = H + 0.5 * control::penalty(u, cc.lambda, cc.gamma1);
    worst_id = std::max(worst_id, std::abs(res.e_c - want) / std::max(1.0, std::abs(want)));
  }
  add(r, "residual_hamiltonian_identity", worst_id, "<", 1e-12, "e_c vs H + R/2, 200 samples");

  // Normalized-gradient step size bound: ||omega|| / (omega'omega + 1)^2 peaks
  // at 3 sqrt(3) / 16 (at ||omega|| = 1/sqrt 3).
  double peak = 3.0 * std::sqrt(3.0) / 16.0;
  double worst_norm = 0.0;
  for (int i = 0; i < 2000; ++i) {
    double w = std::abs(ss(rng)) * (i % 3 == 0 ? 0.3 : 3.0);
    worst_norm = std::max(worst_norm, w / ((w * w + 1.0) * (w * w + 1.0)));
  }
  Vec probe = Vec::Constant(1, 1.0 / std::sqrt(3.0));
  double at_peak = probe.norm() / std::pow(probe.squaredNorm() + 1.0, 2.0);
  add(r, "normalization_peak", worst_norm, "<=", peak + 1e-12,
      "max ||omega||/(w'w+1)^2; analytic peak attained: " + std::to_string(at_peak));

  // Critic convergence on a synthetic persistently excited regression with a
  // known target: error falls below 1% of its initial size, and the envelope
  // (per-window supremum) never grows.
  {
    const int h = 8;
    Vec theta_star(h);
    for (int k = 0; k < h; ++k) theta_star(k) = std::cos(1.0 + 0.7 * k);
    Vec theta = Vec::Zero(h);
    std::vector<double> freqs = {0.37, 0.71, 1.13, 1.51, 2.03, 2.41, 2.99, 3.67};
    double dt = 1e-3, alpha = 150.0, T = 240.0;
    double err0 = (theta - theta_star).norm();
    int win_steps = 5000;
    std::vector<double> sups;
    double cur_sup = 0.0;
    long nsteps = std::lround(T / dt);
    for (long i = 0; i < nsteps; ++i) {
      double t = i * dt;
      Vec omega(h);
      for (int k = 0; k < h; ++k)
        omega(k) = std::sin(freqs[k] * t + 0.3 * k) + 0.2 * std::cos(freqs[(k + 3) % h] * t);
      double e_c = (theta - theta_star).dot(omega);
      double den = std::pow(omega.squaredNorm() + 1.0, 2.0);
      theta -= alpha * dt * e_c / den * omega;
      cur_sup = std::max(cur_sup, (theta - theta_star).norm());
      if ((i + 1) % win_steps == 0) {
        sups.push_back(cur_sup);
        cur_sup = 0.0;
      }
    }
    double final_ratio = (theta - theta_star).norm() / err0;
    add(r, "synthetic_critic_convergence", final_ratio, "<", 0.01,
        "||theta - theta*|| after 240 s vs initial");
    double worst_growth = 0.0;
    for (size_t i = 1; i < sups.size(); ++i)
      worst_growth = std::max(worst_growth, sups[i] - sups[i - 1]);
    add(r, "envelope_monotone_decay", worst_growth, "<=", 0.0,
        "per-5s-window sup of the weight error never increases");
  }

  // Actor jump is a geometric contraction toward the critic-induced policy
  // when alpha_u ||phi||^2 < 2.
  {
    Vec sa(4);
    sa << 0.4, -0.3, 0.2, 0.1;
    Vec theta_c = Vec::Constant(basis_c.size(), 0.5);
    auto cv = learning::critic_value(theta_c, basis_c, sa);
    Vec target = control::saturated_policy(aug.g_aug(sa), cv.grad, cc.lambda, cc.gamma1);
    Vec phi = basis_u.eval(sa);
    double alpha_u = 0.7 / phi.squaredNorm();  // contraction factor 0.3
    double expect = std::abs(1.0 - alpha_u * phi.squaredNorm());
    Mat theta_u = Mat::Zero(basis_u.size(), 1);
    double prev = std::abs((theta_u.transpose() * phi - target)(0, 0));
    double worst_ratio_err = 0.0;
    for (int i = 0; i < 20; ++i) {
      theta_u = learning::actor_jump(theta_u, basis_u, theta_c, basis_c, sa, aug, cc, alpha_u);
      double cur = std::abs((theta_u.transpose() * phi - target)(0, 0));
      // The ratio is only resolvable while the error sits well above the
      // rounding floor of the inner products involved.
      if (prev > 1e-7) worst_ratio_err = std::max(worst_ratio_err, std::abs(cur / prev - expect));
      prev = cur;
    }
    add(r, "actor_jump_contraction", worst_ratio_err, "<", 1e-9,
        "per-jump error ratio vs |1 - alpha_u ||phi||^2|");
  }

  // Empirical persistence of excitation over the noisy phase of a bundled-plant
  // run: smallest eigenvalue of the 2 s windowed Gram of M = omega/(w'w+1),
  // rebuilt from the logged trace columns.
  {
    auto m = mission::load_mission_text(builtin::kPaperSec5Mission);
    engine::SimConfig cfg =
        mission::config_from_json(nlohmann::json::parse(builtin::kDefaultConfig));
    cfg.horizon = 4.0;
    cfg.track_full_horizon = false;
    auto plan = mission::plan_mission(m, cfg);
    const auto& sp = plan.decomp.subproblems.at(0);
    engine::SegmentContext ctx;
    ctx.plant = m.plant.dyn;
    ctx.goal_ref = &m.exosystems.at(sp.goal.trajectory);
    for (const auto& [id, exo2] : m.exosystems)
      ctx.trajectories[id] = engine::make_trajectory_fn(exo2, cfg.dt);
    engine::TraceLog trace = engine::make_trace(2, 2, 1, static_cast<int>(basis_c.size()),
                                                static_cast<int>(basis_u.size()));
    auto res = engine::run_subproblem(sp, ctx, m.x0, 0.0, cfg, {}, &trace);
    control::ControlConfig rcc = cfg.resolve_control(2, false);

    int i_s = trace.column_index("s1");
    int i_u = trace.column_index("u1");
    std::vector<Vec> Ms;
    for (size_t row = 0; row < trace.rows(); ++row) {
      Vec sa(4), u(1);
      for (int k = 0; k < 4; ++k) sa(k) = trace.at(row, i_s + k);
      u << trace.at(row, i_u);
      Vec theta0 = Vec::Zero(basis_c.size());
      auto bres = learning::bellman_residual(theta0, basis_c, sa, u, aug, rcc);
      Ms.push_back(bres.omega / (bres.omega.squaredNorm() + 1.0));
    }
    double best = 0.0;
    long win = std::lround(2.0 / cfg.dt);
    for (long start = 0; start + win <= static_cast<long>(Ms.size()); start += win / 2) {
      Mat gram = Mat::Zero(basis_c.size(), basis_c.size());
      for (long i = start; i < start + win; ++i) gram += Ms[i] * Ms[i].transpose() * cfg.dt;
      Eigen::SelfAdjointEigenSolver<Mat> es2(gram);
      best = std::max(best, es2.eigenvalues().minCoeff());
    }
    add(r, "pe_gram_lambda_min", best, ">", 1e-12,
        "max over 2 s windows in the first 4 s; exit " + std::string(engine::to_string(res.exit)));
  }
  return r;
}

// ---------------------------------------------------------------- mission

SuiteResult suite_mission() {
  SuiteResult r{"mission", {}};
  auto m = mission::load_mission_text(builtin::kPaperSec5Mission);
  engine::SimConfig cfg =
      mission::config_from_json(nlohmann::json::parse(builtin::kDefaultConfig));
  auto plan = mission::plan_mission(m, cfg);
  auto res = mission::run_mission(m, plan, cfg);

  add(r, "verdict_success", res.success ? 1 : 0, "==", 1, res.failure_reason);
  add(r, "replay_agreement", res.replay_agrees && res.replay_phi_s ? 1 : 0, "==", 1,
      "trace semantics vs monitor");

  double min_margin = std::numeric_limits<double>::infinity();
  double max_err_final = 0.0, min_inter = std::numeric_limits<double>::infinity();
  long events = 0, steps = 0, ev_post = 0, st_post = 0;
  for (const auto& s : res.segments) {
    min_margin = std::min(min_margin, s.stats.min_safety_margin);
    max_err_final = std::max(max_err_final, s.stats.max_err_final_fifth);
    if (s.stats.events > 0) min_inter = std::min(min_inter, s.stats.min_inter_event);
    events += s.stats.events;
    steps += s.stats.steps;
    ev_post += s.stats.events_post_noise;
    st_post += s.stats.steps_post_noise;
  }
  add(r, "safety_margin", min_margin, ">", 0.0, "min over the full run");
  add(r, "uub_final_fifth", max_err_final, "<=", 0.6, "max ||x - z1|| over the last 20 s");
  add(r, "intermittency_post_noise",
      st_post > 0 ? static_cast<double>(ev_post) / st_post : 1.0, "<", 0.2,
      std::to_string(ev_post) + " events / " + std::to_string(st_post) + " steps after noise decay");
  add(r, "events_below_steps", static_cast<double>(events), "<", static_cast<double>(steps));
  add(r, "zeno_min_inter_event", min_inter, ">=", cfg.dt, "smallest event gap");

  auto res2 = mission::run_mission(m, plan, cfg);
  add(r, "determinism_rerun", res.trace.hash() == res2.trace.hash() ? 1 : 0, "==", 1,
      "identical trace hash on a second run");
  return r;
}

}  // namespace

std::vector<std::string> suite_names() { return {"barrier", "ltl", "trigger", "learning", "mission"}; }

SuiteResult run_suite(const std::string& name) {
  if (name == "barrier") return suite_barrier();
  if (name == "ltl") return suite_ltl();
  if (name == "trigger") return suite_trigger();
  if (name == "learning") return suite_learning();
  if (name == "mission") return suite_mission();
  throw input_error("unknown verify suite '" + name + "' (have: barrier, ltl, trigger, learning, mission)");
}

nlohmann::json to_json(const SuiteResult& r) {
  nlohmann::json j;
  j["suite"] = r.suite;
  j["pass"] = r.all_pass();
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"value", c.value},
                      {"relation", c.relation},
                      {"bound", c.bound},
                      {"detail", c.detail}});
  j["checks"] = checks;
  return j;
}

std::string to_text(const SuiteResult& r) {
  std::ostringstream os;
  for (const auto& c : r.checks) {
    os << (c.pass ? "PASS" : "FAIL") << " " << r.suite << "." << c.name << "  " << c.value << " "
       << c.relation << " " << c.bound;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  os << (r.all_pass() ? "SUITE PASS " : "SUITE FAIL ") << r.suite << "\n";
  return os.str();
}

}  // namespace tlt::verify
