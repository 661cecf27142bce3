#pragma once

#include <random>
#include <vector>

#include "tltrack/control.hpp"
#include "tltrack/plant.hpp"
#include "tltrack/types.hpp"

namespace tlt::learning {

/**
 * Polynomial feature basis over a d-dimensional input: the degree-2
 * monomials s_i s_j (i <= j, row-major pair order), optionally preceded by
 * the linear terms s_1..s_d. The critic uses the pure quadratic basis,
 * the actor prepends the linear block.
 */
class PolyBasis {
 public:
  PolyBasis(int dim, bool with_linear);

  int dim() const { return dim_; }
  int size() const { return size_; }
  bool with_linear() const { return with_linear_; }

  Vec eval(const Vec& s) const;
  /** Jacobian d phi / d s, size() x dim(). */
  Mat jac(const Vec& s) const;

 private:
  int dim_;
  bool with_linear_;
  int size_;
};

struct CriticEval {
  double V = 0.0;
  Vec grad;  // (d phi/d s)' theta
};

/** Value estimate V = theta' phi(s_aug) and its gradient. */
CriticEval critic_value(const Vec& theta_c, const PolyBasis& basis, const Vec& s_aug);

struct Residual {
  double e_c = 0.0;   // theta' omega + r_hat
  double r_hat = 0.0; // (1/2) e_s' Q e_s + R(u)
  Vec omega;          // (d phi/d s)(F_aug + G_aug u) - gamma phi
};

/** Bellman residual of the critic along the applied control. */
Residual bellman_residual(const Vec& theta_c, const PolyBasis& basis, const Vec& s_aug,
                          const Vec& u, const plant::AugmentedSystem& sys,
                          const control::ControlConfig& cfg);

/**
 * Normalized gradient step, Euler-discretized:
 * theta <- theta - alpha dt omega e_c / (omega' omega + 1)^2.
 */
Vec critic_step(const Vec& theta_c, const Residual& res, double alpha, double dt);

/**
 * Actor output theta_u' phi_u(s_hat), clamped componentwise to
 * lambda (1 - 1e-9). theta_u is size() x m_u.
 */
Vec actor_output(const Mat& theta_u, const PolyBasis& basis, const Vec& s_hat, double lambda);

/**
 * Impulsive actor update at an event: one gradient step of the squared gap
 * between the actor output and the critic-induced saturated policy at the
 * sample,
 * theta_u+ = theta_u - alpha_u phi_u(s_hat) (theta_u' phi_u(s_hat) - u_c(s_hat))'.
 */
Mat actor_jump(const Mat& theta_u, const PolyBasis& actor_basis, const Vec& theta_c,
               const PolyBasis& critic_basis, const Vec& s_hat,
               const plant::AugmentedSystem& sys, const control::ControlConfig& cfg,
               double alpha_u);

/**
 * Exploration signal: per channel, a0 e^(-kappa t) sum_k sin(w_k t + phase_j)
 * with phase_j = j pi / 4. The envelope is a0 e^(-kappa t).
 */
struct NoiseSchedule {
  double a0 = 0.0;
  double kappa = 0.0;
  std::vector<double> freqs;

  double envelope(double t) const;
  Vec sample(double t, int m_u) const;
  /** First time the envelope falls to `floor` times a0 (inf if a0 == 0 never decays). */
  double cutoff_time(double floor = 0.01) const;
};

/** Critic/actor parameter block with its gains. */
struct LearnerState {
  Vec theta_c;
  Mat theta_u;
  double alpha = 150.0;
  double alpha_u = 50.0;
  NoiseSchedule noise;
};

/** Uniform [0, 1] weight init, deterministic in the seed. */
LearnerState init_learner(int critic_size, int actor_size, int m_u, std::uint64_t seed);

}  // namespace tlt::learning
