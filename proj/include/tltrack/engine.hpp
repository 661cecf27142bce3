#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>

#include "tltrack/automaton.hpp"
#include "tltrack/control.hpp"
#include "tltrack/learning.hpp"
#include "tltrack/plant.hpp"
#include "tltrack/trace.hpp"

namespace tlt::engine {

/** One classical RK4 step of ydot = f(t, y); throws on non-finite results. */
Vec rk4_step(const std::function<Vec(double, const Vec&)>& f, double t, const Vec& y, double dt);

/**
 * Wrap an exosystem as a trajectory of global time. Closed forms are used
 * directly; otherwise zdot = h(z) is integrated from z(0) = z0 with RK4 at
 * step dt_max, caching the clock so ascending queries are cheap.
 */
ltl::TrajectoryFn make_trajectory_fn(const plant::Exosystem& exo, double dt_max = 1e-3);

/**
 * Run parameters. Q empty means q_scale * I sized to the safety polytope;
 * gamma NaN resolves to the bundled default discount; auto_lipschitz replaces
 * L by a sampled estimate of the critic-induced policy at segment start.
 */
struct SimConfig {
  double dt = 1e-3;
  double horizon = 100.0;
  std::uint64_t seed = 0;

  control::ControlConfig control{20.0, 0.02, std::numeric_limits<double>::quiet_NaN(), 0.5, 200.0, Mat()};
  double q_scale = 800.0;
  bool auto_lipschitz = false;

  double alpha = 500.0;
  double alpha_u = 10.0;
  learning::NoiseSchedule noise{0.3, 0.15, {0.9, 1.7, 2.9, 4.3, 6.1, 7.9}};
  double noise_floor = 0.01;  // envelope fraction that ends the exploration phase

  // Liveness guard: force an input update when the trigger has been silent
  // this long. At a closed-loop equilibrium the trigger gap is exactly zero,
  // so a frozen input would otherwise never be revised no matter how far the
  // parked state is from the reference (seen with static goals).
  double max_inter_event = 0.5;

  bool carry_weights = true;
  bool track_full_horizon = false;
  int state_cap = 4096;  // automaton construction abort threshold (planning)

  /** Concrete control config for a segment (Q sized m x m, gamma resolved). */
  control::ControlConfig resolve_control(int m, bool static_ref) const;
};

enum class ExitKind { GoalReached, HorizonExceeded, SafetyViolated, Rejected };

const char* to_string(ExitKind k);

struct SegmentStats {
  long steps = 0;
  int events = 0;
  double min_inter_event = std::numeric_limits<double>::infinity();
  double mean_inter_event = 0.0;
  double post_noise_t = 0.0;  // global time when the exploration phase ended
  long steps_post_noise = 0;
  long events_post_noise = 0;
  double goal_time = -1.0;  // first time inside the goal ball, -1 if never
  double final_err = std::numeric_limits<double>::quiet_NaN();
  double max_err_final_fifth = 0.0;  // max tracking error over the last 20% of the window
  double max_abs_state = 0.0;
  double min_safety_margin = std::numeric_limits<double>::infinity();
  double observed_policy_lipschitz = 0.0;
  double lipschitz_L = 0.0;  // the L actually used by the trigger
  double runtime_sec = 0.0;
};

struct SegmentResult {
  ExitKind exit = ExitKind::Rejected;
  std::string reason;
  double t0 = 0.0;
  double t_end = 0.0;
  Vec x_final;
  SegmentStats stats;
  learning::LearnerState learner;
};

/**
 * Everything a segment needs beyond the sub-problem itself. The monitor
 * fields are optional; when present the FSA is advanced on every recorded
 * valuation and rejection aborts the segment.
 */
struct SegmentContext {
  Dynamics plant;
  const plant::Exosystem* goal_ref = nullptr;
  ltl::TrajectoryTable trajectories;
  const ltl::PredicateTable* predicates = nullptr;
  const automaton::Automaton* monitor = nullptr;
  int* monitor_state = nullptr;
  ltl::Trace* valuations = nullptr;
};

/** Trace column layout for given dimensions. */
TraceLog make_trace(int n, int m, int m_u, int critic_size, int actor_size);

/**
 * Execute one tracking sub-problem from x0 at global time t0. Ground truth
 * is integrated in x-space with the input held between steps; s_aug is
 * recomputed from x every step. The event trigger is evaluated at every
 * integrator step, the critic updates every step, the actor jumps at events.
 * Pass an empty learner (theta_c of size 0) to initialize from cfg.seed.
 * Rows are appended to `trace` when non-null; log_initial_row suppresses the
 * first row when a previous segment already logged this timestamp.
 */
SegmentResult run_subproblem(const automaton::SubProblem& sp, const SegmentContext& ctx,
                             const Vec& x0, double t0, const SimConfig& cfg,
                             learning::LearnerState learner = {}, TraceLog* trace = nullptr,
                             bool log_initial_row = true);

}  // namespace tlt::engine
