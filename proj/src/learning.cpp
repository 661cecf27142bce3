#include "tltrack/learning.hpp"

#include <cmath>

#include "tltrack/errors.hpp"

namespace tlt::learning {

PolyBasis::PolyBasis(int dim, bool with_linear) : dim_(dim), with_linear_(with_linear) {
  if (dim <= 0) throw input_error("PolyBasis: dimension must be positive");
  size_ = dim * (dim + 1) / 2 + (with_linear ? dim : 0);
}

Vec PolyBasis::eval(const Vec& s) const {
  if (s.size() != dim_) throw input_error("PolyBasis::eval: dimension mismatch");
  Vec phi(size_);
  int k = 0;
  if (with_linear_) {
    phi.head(dim_) = s;
    k = dim_;
  }
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) phi[k++] = s[i] * s[j];
  }
  return phi;
}

Mat PolyBasis::jac(const Vec& s) const {
  if (s.size() != dim_) throw input_error("PolyBasis::jac: dimension mismatch");
  Mat J = Mat::Zero(size_, dim_);
  int k = 0;
  if (with_linear_) {
    J.topLeftCorner(dim_, dim_).setIdentity();
    k = dim_;
  }
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      J(k, i) += s[j];
      J(k, j) += s[i];
      ++k;
    }
  }
  return J;
}

CriticEval critic_value(const Vec& theta_c, const PolyBasis& basis, const Vec& s_aug) {
  if (theta_c.size() != basis.size()) throw input_error("critic_value: weight size mismatch");
  CriticEval out;
  out.V = theta_c.dot(basis.eval(s_aug));
  out.grad = basis.jac(s_aug).transpose() * theta_c;
  return out;
}

Residual bellman_residual(const Vec& theta_c, const PolyBasis& basis, const Vec& s_aug,
                          const Vec& u, const plant::AugmentedSystem& sys,
                          const control::ControlConfig& cfg) {
  if (theta_c.size() != basis.size()) throw input_error("bellman_residual: weight size mismatch");
  const int m = sys.m();
  Vec e_s = s_aug.head(m);
  Residual res;
  res.omega = basis.jac(s_aug) * sys.deriv(s_aug, u) - cfg.gamma * basis.eval(s_aug);
  res.r_hat = 0.5 * e_s.dot(cfg.Q * e_s) + control::penalty(u, cfg.lambda, cfg.gamma1);
  res.e_c = theta_c.dot(res.omega) + res.r_hat;
  return res;
}

Vec critic_step(const Vec& theta_c, const Residual& res, double alpha, double dt) {
  double norm = res.omega.squaredNorm() + 1.0;
  return theta_c - (alpha * dt * res.e_c / (norm * norm)) * res.omega;
}

Vec actor_output(const Mat& theta_u, const PolyBasis& basis, const Vec& s_hat, double lambda) {
  if (theta_u.rows() != basis.size()) throw input_error("actor_output: weight size mismatch");
  return control::clamp_input(theta_u.transpose() * basis.eval(s_hat), lambda);
}

Mat actor_jump(const Mat& theta_u, const PolyBasis& actor_basis, const Vec& theta_c,
               const PolyBasis& critic_basis, const Vec& s_hat,
               const plant::AugmentedSystem& sys, const control::ControlConfig& cfg,
               double alpha_u) {
  if (theta_u.rows() != actor_basis.size()) throw input_error("actor_jump: weight size mismatch");
  Vec phi = actor_basis.eval(s_hat);
  Vec raw = theta_u.transpose() * phi;  // pre-clamp actor output at the sample
  CriticEval ce = critic_value(theta_c, critic_basis, s_hat);
  Vec target = control::saturated_policy(sys.g_aug(s_hat), ce.grad, cfg.lambda, cfg.gamma1);
  return theta_u - alpha_u * phi * (raw - target).transpose();
}

double NoiseSchedule::envelope(double t) const { return a0 * std::exp(-kappa * t); }

Vec NoiseSchedule::sample(double t, int m_u) const {
  Vec out = Vec::Zero(m_u);
  if (a0 == 0.0 || freqs.empty()) return out;
  double env = envelope(t);
  for (int j = 0; j < m_u; ++j) {
    double phase = j * M_PI / 4.0;
    double sum = 0.0;
    for (double w : freqs) sum += std::sin(w * t + phase);
    out[j] = env * sum;
  }
  return out;
}

double NoiseSchedule::cutoff_time(double floor) const {
  if (a0 == 0.0) return 0.0;
  if (kappa <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(floor) / kappa;
}

LearnerState init_learner(int critic_size, int actor_size, int m_u, std::uint64_t seed) {
  LearnerState st;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  st.theta_c = Vec(critic_size);
  for (int i = 0; i < critic_size; ++i) st.theta_c[i] = unit(rng);
  st.theta_u = Mat(actor_size, m_u);
  for (int i = 0; i < actor_size; ++i) {
    for (int j = 0; j < m_u; ++j) st.theta_u(i, j) = unit(rng);
  }
  return st;
}

}  // namespace tlt::learning
