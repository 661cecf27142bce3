#include "tltrack/control.hpp"

#include <cmath>

#include "tltrack/errors.hpp"

namespace tlt::control {

void ControlConfig::validate(int m) const {
  if (!(lambda > 0.0)) throw input_error("control config: lambda must be positive");
  if (!(gamma1 > 0.0)) throw input_error("control config: gamma1 must be positive");
  if (!(gamma >= 0.0)) throw input_error("control config: gamma must be nonnegative");
  if (!(beta > 0.0 && beta < 1.0 / std::sqrt(2.0))) {
    throw input_error("control config: beta must lie in (0, 1/sqrt(2))");
  }
  if (!(L > 0.0)) throw input_error("control config: L must be positive");
  if (Q.rows() != m || Q.cols() != m) {
    throw input_error("control config: Q must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  if (!Q.isApprox(Q.transpose(), 1e-12)) throw input_error("control config: Q must be symmetric");
  if (lambda_min_Q() < 0.0) throw input_error("control config: Q must be positive semidefinite");
}

double ControlConfig::lambda_min_Q() const {
  Eigen::SelfAdjointEigenSolver<Mat> eig(Q);
  return eig.eigenvalues().minCoeff();
}

double penalty(const Vec& u, double lambda, double gamma1) {
  double total = 0.0;
  for (int k = 0; k < u.size(); ++k) {
    double ratio = u[k] / lambda;
    if (!(std::abs(ratio) < 1.0)) {
      throw domain_error("penalty: |u| = " + std::to_string(std::abs(u[k])) +
                         " outside the saturation domain (-" + std::to_string(lambda) + ", " +
                         std::to_string(lambda) + ")");
    }
    total += gamma1 * (lambda * u[k] * std::atanh(ratio) +
                       0.5 * lambda * lambda * std::log1p(-ratio * ratio));
  }
  return total;
}

double hamiltonian(const Vec& s_aug, const Vec& u, double V, const Vec& gradV,
                   const plant::AugmentedSystem& sys, const ControlConfig& cfg) {
  const int m = sys.m();
  if (gradV.size() != 2 * m) throw input_error("hamiltonian: gradV dimension mismatch");
  Vec e_s = s_aug.head(m);
  double state_cost = e_s.dot(cfg.Q * e_s);
  double flow = gradV.dot(sys.deriv(s_aug, u));
  return flow + 0.5 * (state_cost + penalty(u, cfg.lambda, cfg.gamma1) - 2.0 * cfg.gamma * V);
}

Vec clamp_input(Vec u, double lambda) {
  const double bound = lambda * (1.0 - 1e-9);
  for (int k = 0; k < u.size(); ++k) u[k] = std::clamp(u[k], -bound, bound);
  return u;
}

Vec saturated_policy(const Mat& G_aug, const Vec& gradV, double lambda, double gamma1) {
  if (G_aug.rows() != gradV.size()) throw input_error("saturated_policy: dimension mismatch");
  Vec arg = G_aug.transpose() * gradV / (2.0 * gamma1 * lambda);
  Vec u(arg.size());
  for (int k = 0; k < u.size(); ++k) u[k] = -lambda * std::tanh(arg[k]);
  return clamp_input(std::move(u), lambda);
}

TriggerDecision trigger_check(const Vec& e_trig, const Vec& e_s, const Vec& u,
                              const ControlConfig& cfg, double lambda_min_Q) {
  TriggerDecision d;
  double denom = cfg.L * cfg.L * cfg.lambda * cfg.gamma1;
  double budget = (0.5 - cfg.beta * cfg.beta) * lambda_min_Q * e_s.squaredNorm() +
                  penalty(u, cfg.lambda, cfg.gamma1);
  d.threshold = budget / denom;
  d.lhs = e_trig.squaredNorm();
  d.fire = d.lhs > d.threshold;
  return d;
}

double estimate_policy_lipschitz(const std::function<Vec(const Vec&)>& policy, const Vec& lo,
                                 const Vec& hi, int pairs, std::mt19937_64& rng,
                                 double safety_factor) {
  if (lo.size() != hi.size()) throw input_error("estimate_policy_lipschitz: box dimension mismatch");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sample = [&] {
    Vec s(lo.size());
    for (int i = 0; i < s.size(); ++i) s[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    return s;
  };
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    Vec s1 = sample();
    Vec s2 = sample();
    double dist = (s1 - s2).norm();
    if (dist < 1e-12) continue;
    worst = std::max(worst, (policy(s1) - policy(s2)).norm() / dist);
  }
  return worst * safety_factor;
}

}  // namespace tlt::control
