#include "tltrack/engine.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <random>

#include "tltrack/barrier.hpp"
#include "tltrack/errors.hpp"

namespace tlt::engine {

Vec rk4_step(const std::function<Vec(double, const Vec&)>& f, double t, const Vec& y, double dt) {
  Vec k1 = f(t, y);
  Vec k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1);
  Vec k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2);
  Vec k4 = f(t + dt, y + dt * k3);
  Vec out = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.allFinite())
    throw Error(ErrorCode::Integration, "rk4_step: state became non-finite at t=" + std::to_string(t));
  return out;
}

namespace {

// Clock cache for exosystems without a closed form. Ascending queries step
// forward from the last cached point; a query behind the cache restarts from 0.
struct ExoClock {
  plant::Exosystem exo;
  double dt;
  double t_cur = 0.0;
  Vec z_cur;

  Vec at(double t) {
    if (t < t_cur - 1e-12) {
      t_cur = 0.0;
      z_cur = exo.z0;
    }
    auto rhs = [this](double, const Vec& z) { return exo.h(z); };
    while (t_cur + dt <= t + 1e-12) {
      z_cur = rk4_step(rhs, t_cur, z_cur, dt);
      t_cur += dt;
    }
    double rem = t - t_cur;
    if (rem > 1e-12) return rk4_step(rhs, t_cur, z_cur, rem);
    return z_cur;
  }
};

}  // namespace

ltl::TrajectoryFn make_trajectory_fn(const plant::Exosystem& exo, double dt_max) {
  if (exo.has_closed()) {
    auto z = exo.z_closed;
    return [z](double t) { return z(t); };
  }
  if (exo.z0.size() == 0)
    throw input_error("exosystem '" + exo.id + "' has neither a closed form nor an initial state");
  auto clock = std::make_shared<ExoClock>();
  clock->exo = exo;
  clock->dt = dt_max;
  clock->z_cur = exo.z0;
  return [clock](double t) { return clock->at(t); };
}

control::ControlConfig SimConfig::resolve_control(int m, bool static_ref) const {
  control::ControlConfig cc = control;
  // "auto" resolves to the same discount the bundled default config uses; a
  // no-discount fit leaves the value level unidentified off the visited tube
  // and the induced policy is unreliable away from the data.
  (void)static_ref;
  if (std::isnan(cc.gamma)) cc.gamma = 2.0;
  if (cc.Q.size() == 0) cc.Q = q_scale * Mat::Identity(m, m);
  cc.validate(m);
  return cc;
}

const char* to_string(ExitKind k) {
  switch (k) {
    case ExitKind::GoalReached: return "goal_reached";
    case ExitKind::HorizonExceeded: return "horizon_exceeded";
    case ExitKind::SafetyViolated: return "safety_violated";
    case ExitKind::Rejected: return "rejected";
  }
  return "unknown";
}

TraceLog make_trace(int n, int m, int m_u, int critic_size, int actor_size) {
  std::vector<std::string> cols;
  cols.push_back("t");
  for (int i = 0; i < n; ++i) cols.push_back("x" + std::to_string(i + 1));
  for (int i = 0; i < n; ++i) cols.push_back("z" + std::to_string(i + 1));
  cols.push_back("err");
  for (int i = 0; i < 2 * m; ++i) cols.push_back("s" + std::to_string(i + 1));
  for (int i = 0; i < m_u; ++i) cols.push_back("u" + std::to_string(i + 1));
  cols.push_back("event");
  cols.push_back("ec");
  cols.push_back("etrig");
  for (int i = 0; i < critic_size; ++i) cols.push_back("thc" + std::to_string(i + 1));
  for (int i = 0; i < actor_size; ++i) cols.push_back("thu" + std::to_string(i + 1));
  cols.push_back("q");
  return TraceLog(cols);
}

namespace {

struct RowWriter {
  TraceLog* trace;
  int n, m, m_u;
  double last_t = std::numeric_limits<double>::quiet_NaN();

  void write(double t, const Vec& x, const Vec& z, const Vec& sa, const Vec& u, int event,
             double ec, double etrig, const Vec& thc, const Vec& thu, int q) {
    if (!trace) return;
    if (!std::isnan(last_t) && t <= last_t + 1e-15) return;  // segment handoff shares a timestamp
    std::vector<double> row;
    row.reserve(trace->width());
    row.push_back(t);
    for (int i = 0; i < n; ++i) row.push_back(x(i));
    for (int i = 0; i < n; ++i) row.push_back(i < z.size() ? z(i) : 0.0);
    row.push_back((x - z).norm());
    for (int i = 0; i < 2 * m; ++i) row.push_back(sa(i));
    for (int i = 0; i < m_u; ++i) row.push_back(u(i));
    row.push_back(static_cast<double>(event));
    row.push_back(ec);
    row.push_back(etrig);
    for (int i = 0; i < thc.size(); ++i) row.push_back(thc(i));
    for (int i = 0; i < thu.size(); ++i) row.push_back(thu(i));
    row.push_back(static_cast<double>(q));
    trace->push_row(row);
    last_t = t;
  }
};

}  // namespace

SegmentResult run_subproblem(const automaton::SubProblem& sp, const SegmentContext& ctx,
                             const Vec& x0, double t0, const SimConfig& cfg,
                             learning::LearnerState learner, TraceLog* trace,
                             bool log_initial_row) {
  auto wall0 = std::chrono::steady_clock::now();
  SegmentResult res;
  res.t0 = t0;
  res.t_end = t0;
  res.x_final = x0;

  double inter_sum = 0.0;
  auto finish = [&](ExitKind kind, std::string reason) -> SegmentResult& {
    if (res.stats.events > 0) res.stats.mean_inter_event = inter_sum / res.stats.events;
    res.exit = kind;
    res.reason = std::move(reason);
    res.stats.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    res.learner = std::move(learner);
    return res;
  };

  if (sp.hold)
    throw input_error("hold segments are monitored, not executed; sub-problem " +
                      std::to_string(sp.index) + " is a hold segment");
  if (ctx.goal_ref == nullptr) throw input_error("segment context is missing the goal exosystem");

  const int n = ctx.plant.n;
  const int m_u = ctx.plant.m_u;
  if (x0.size() != n) throw input_error("x0 has wrong dimension for the plant");

  // Reject before touching the learner so a bad start leaves the weights alone.
  if (!sp.safety.contains(x0, /*strict=*/true))
    return finish(ExitKind::Rejected,
                  "initial state is not strictly inside the safety polytope of segment " +
                      std::to_string(sp.index));

  barrier::BarrierMap map(sp.safety);
  const int m = map.m();

  auto it = ctx.trajectories.find(sp.goal.trajectory);
  if (it == ctx.trajectories.end())
    throw input_error("goal trajectory '" + sp.goal.trajectory + "' is missing from the context");
  ltl::TrajectoryFn zfn = it->second;

  barrier::TransformedReference ref(map, zfn, ctx.goal_ref->h);
  try {
    ref.validate(t0, t0 + cfg.horizon, 2048);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SafetyDomain) throw;
    return finish(ExitKind::Rejected, std::string("reference validation failed: ") + e.what());
  }

  plant::AugmentedSystem aug(map, ctx.plant, ref);
  learning::PolyBasis basis_c(2 * m, /*with_linear=*/false);
  learning::PolyBasis basis_u(2 * m, /*with_linear=*/true);

  control::ControlConfig cc = cfg.resolve_control(m, ctx.goal_ref->is_static);
  const double lam_min_q = cc.lambda_min_Q();

  if (learner.theta_c.size() == 0)
    learner = learning::init_learner(basis_c.size(), basis_u.size(), m_u, cfg.seed);
  if (learner.theta_c.rows() != basis_c.size() || learner.theta_u.rows() != basis_u.size() ||
      learner.theta_u.cols() != m_u)
    throw input_error("carried learner weights do not match the segment dimensions");
  learner.alpha = cfg.alpha;
  learner.alpha_u = cfg.alpha_u;
  learner.noise = cfg.noise;

  if (cfg.auto_lipschitz) {
    // Sample the critic-induced policy over the s-image of the polytope
    // shrunk to 90% of its extent, mirrored for the reference block.
    Vec lo(2 * m), hi(2 * m);
    for (int i = 0; i < m; ++i) {
      double a = barrier::value(0.9 * sp.safety.c(i), sp.safety.c(i), sp.safety.C(i));
      double b = barrier::value(0.9 * sp.safety.C(i), sp.safety.c(i), sp.safety.C(i));
      lo(i) = lo(m + i) = std::min(a, b);
      hi(i) = hi(m + i) = std::max(a, b);
    }
    std::mt19937_64 rng(cfg.seed ^ 0x5bf0a8b1461583c9ull);
    auto policy = [&](const Vec& s_aug) {
      auto cv = learning::critic_value(learner.theta_c, basis_c, s_aug);
      return control::saturated_policy(aug.g_aug(s_aug), cv.grad, cc.lambda, cc.gamma1);
    };
    cc.L = control::estimate_policy_lipschitz(policy, lo, hi, 256, rng);
  }
  res.stats.lipschitz_L = cc.L;

  RowWriter rows{trace, n, m, m_u};
  if (trace) {
    int want = 1 + 2 * n + 1 + 2 * m + m_u + 3 + basis_c.size() + basis_u.size() * m_u + 1;
    if (trace->width() != want)
      throw input_error("trace column layout does not match the segment dimensions");
    if (!log_initial_row && trace->rows() > 0) rows.last_t = trace->at(trace->rows() - 1, 0);
  }

  const double eps = sp.goal.eps;
  auto in_goal = [&](const Vec& x, double t) { return (x - zfn(t)).norm() <= eps; };
  auto monitor_q = [&]() { return ctx.monitor_state ? *ctx.monitor_state : -1; };

  Vec x = x0;
  double t = t0;
  SegmentStats& st = res.stats;
  const double noise_end = t0 + learner.noise.cutoff_time(cfg.noise_floor);
  st.post_noise_t = noise_end;
  const double fifth_start = t0 + 0.8 * cfg.horizon;

  // Terminal row: same layout as loop rows, event never set, e_c evaluated
  // at the final state with the last applied input.
  auto log_terminal = [&](double tt, const Vec& xx, const Vec& u_last, const Vec& s_hat) {
    if (!trace) return;
    Vec sa = aug.lift(xx, tt);
    Vec u = u_last.size() == m_u ? u_last : Vec::Zero(m_u);
    auto bres = learning::bellman_residual(learner.theta_c, basis_c, sa, u, aug, cc);
    Vec etr = s_hat.size() == 2 * m ? Vec(s_hat - sa) : Vec(Vec::Zero(2 * m));
    rows.write(tt, xx, zfn(tt), sa, u, 0, bres.e_c, etr.norm(), learner.theta_c,
               Eigen::Map<const Vec>(learner.theta_u.data(), learner.theta_u.size()), monitor_q());
  };

  // Already at the goal: done before the first step.
  if (in_goal(x, t)) {
    st.goal_time = t;
    st.final_err = (x - zfn(t)).norm();
    st.min_safety_margin = sp.safety.margin(x);
    if (log_initial_row) log_terminal(t, x, Vec(), Vec());
    res.t_end = t;
    res.x_final = x;
    return finish(ExitKind::GoalReached, "inside the goal ball at segment start");
  }

  Vec s_hat = aug.lift(x, t);          // last trigger sample
  double r_last = t;                   // time of the last event
  Vec u = Vec::Zero(m_u);              // input applied over the previous interval
  const long N = std::lround(cfg.horizon / cfg.dt);

  for (long k = 0; k < N; ++k) {
    t = t0 + static_cast<double>(k) * cfg.dt;
    Vec sa = aug.lift(x, t);
    Vec e_trig = s_hat - sa;
    Vec e_s = sa.head(m);

    int event = 0;
    Vec theta_u_row = Eigen::Map<const Vec>(learner.theta_u.data(), learner.theta_u.size());
    auto trig = control::trigger_check(e_trig, e_s, u, cc, lam_min_q);
    bool heartbeat = (t - r_last) >= cfg.max_inter_event;
    if (k > 0 && (trig.fire || heartbeat)) {
      event = 1;
      st.events += 1;
      if (t >= noise_end) st.events_post_noise += 1;
      double gap = t - r_last;
      st.min_inter_event = std::min(st.min_inter_event, gap);
      inter_sum += gap;
      r_last = t;
      s_hat = sa;
      learner.theta_u = learning::actor_jump(learner.theta_u, basis_u, learner.theta_c, basis_c,
                                             s_hat, aug, cc, learner.alpha_u);
    }

    Vec u_policy = learning::actor_output(learner.theta_u, basis_u, s_hat, cc.lambda);
    u = control::clamp_input(u_policy + learner.noise.sample(t - t0, m_u), cc.lambda);

    auto bres = learning::bellman_residual(learner.theta_c, basis_c, sa, u, aug, cc);

    double etrig_norm = e_trig.norm();
    if (etrig_norm > 1e-9) {
      Vec u_here = learning::actor_output(learner.theta_u, basis_u, sa, cc.lambda);
      double ratio = (u_policy - u_here).norm() / etrig_norm;
      st.observed_policy_lipschitz = std::max(st.observed_policy_lipschitz, ratio);
    }

    rows.write(t, x, zfn(t), sa, u, event, bres.e_c, etrig_norm, learner.theta_c, theta_u_row,
               monitor_q());

    learner.theta_c = learning::critic_step(learner.theta_c, bres, learner.alpha, cfg.dt);

    st.steps += 1;
    if (t >= noise_end) st.steps_post_noise += 1;

    auto rhs = [&](double, const Vec& xx) -> Vec { return ctx.plant.f(xx) + ctx.plant.g(xx) * u; };
    x = rk4_step(rhs, t, x, cfg.dt);
    double tn = t0 + static_cast<double>(k + 1) * cfg.dt;

    st.max_abs_state = std::max(st.max_abs_state, x.lpNorm<Eigen::Infinity>());
    double margin = sp.safety.margin(x);
    st.min_safety_margin = std::min(st.min_safety_margin, margin);
    double err_now = (x - zfn(tn)).norm();
    if (tn >= fifth_start) st.max_err_final_fifth = std::max(st.max_err_final_fifth, err_now);

    if (!sp.safety.contains(x, /*strict=*/false)) {
      res.t_end = tn;
      res.x_final = x;
      st.final_err = err_now;
      return finish(ExitKind::SafetyViolated,
                    "state left the safety polytope at t=" + std::to_string(tn));
    }

    if (ctx.predicates && ctx.valuations) {
      std::map<std::string, bool> val;
      for (const auto& [name, pred] : *ctx.predicates)
        val[name] = ltl::eval_predicate(pred, x, tn, ctx.trajectories);
      ctx.valuations->push_back({tn, val});
      if (ctx.monitor && ctx.monitor_state) {
        auto ms = automaton::monitor_step(*ctx.monitor, *ctx.monitor_state, val);
        *ctx.monitor_state = ms.state;
        if (ms.rejecting) {
          res.t_end = tn;
          res.x_final = x;
          st.final_err = err_now;
          return finish(ExitKind::SafetyViolated,
                        "mission monitor rejected at t=" + std::to_string(tn));
        }
      }
      for (const auto& atom : sp.forbidden) {
        auto fit = val.find(atom);
        if (fit != val.end() && fit->second) {
          res.t_end = tn;
          res.x_final = x;
          st.final_err = err_now;
          return finish(ExitKind::SafetyViolated,
                        "forbidden atom '" + atom + "' became true at t=" + std::to_string(tn));
        }
      }
    }

    if (in_goal(x, tn)) {
      if (st.goal_time < 0.0) st.goal_time = tn;
      if (!cfg.track_full_horizon) {
        res.t_end = tn;
        res.x_final = x;
        st.final_err = err_now;
        log_terminal(tn, x, u, s_hat);
        return finish(ExitKind::GoalReached, "goal ball reached at t=" + std::to_string(tn));
      }
    }
  }

  double t_end = t0 + static_cast<double>(N) * cfg.dt;
  res.t_end = t_end;
  res.x_final = x;
  st.final_err = (x - zfn(t_end)).norm();
  log_terminal(t_end, x, u, s_hat);
  if (cfg.track_full_horizon && st.goal_time >= 0.0)
    return finish(ExitKind::GoalReached,
                  "tracked to the horizon; goal ball first reached at t=" + std::to_string(st.goal_time));
  return finish(ExitKind::HorizonExceeded, "horizon elapsed before the goal ball was reached");
}

}  // namespace tlt::engine
