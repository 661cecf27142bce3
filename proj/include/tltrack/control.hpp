#pragma once

#include <random>

#include "tltrack/plant.hpp"
#include "tltrack/types.hpp"

namespace tlt::control {

/**
 * Cost and trigger parameters. Q weighs the tracking-error half of s_aug
 * (the reference half carries zero weight), lambda is the input bound,
 * gamma1 scales the input penalty, gamma discounts, beta in (0, 1/sqrt(2))
 * splits the trigger budget, L bounds the policy's Lipschitz constant.
 */
struct ControlConfig {
  double lambda = 5.0;
  double gamma1 = 1.0;
  double gamma = 0.01;
  double beta = 0.5;
  double L = 10.0;
  Mat Q;

  void validate(int m) const;
  double lambda_min_Q() const;
};

/**
 * Saturation penalty R(u) = sum_k gamma1 * [lambda u_k atanh(u_k/lambda)
 * + (lambda^2/2) log(1 - u_k^2/lambda^2)], the closed form of
 * integrating lambda atanh(v/lambda) gamma1 from 0 to u_k. Requires
 * |u_k| < lambda; approaches gamma1 lambda^2 log 2 per channel at the bound.
 */
double penalty(const Vec& u, double lambda, double gamma1);

/**
 * Hamiltonian along the augmented flow:
 * H = gradV' (F_aug + G_aug u) + (1/2)(s' Q_aug s + R(u) - 2 gamma V).
 */
double hamiltonian(const Vec& s_aug, const Vec& u, double V, const Vec& gradV,
                   const plant::AugmentedSystem& sys, const ControlConfig& cfg);

/**
 * Input-saturated policy u = -lambda tanh((1/(2 gamma1 lambda)) G_aug' gradV),
 * clamped to lambda (1 - 1e-9) so the output stays strictly inside the bound
 * even where tanh rounds to 1.
 */
Vec saturated_policy(const Mat& G_aug, const Vec& gradV, double lambda, double gamma1);

/** Componentwise clamp to |u_k| <= lambda (1 - 1e-9). */
Vec clamp_input(Vec u, double lambda);

struct TriggerDecision {
  bool fire = false;
  double lhs = 0.0;        // ||e_trig||^2
  double threshold = 0.0;  // ((1/2 - beta^2) lmin(Q) ||e_s||^2 + R(u)) / (L^2 lambda gamma1)
};

/**
 * Event-trigger test: fire when the sampling error exceeds the stability
 * budget. lambda_min_Q is passed in so the eigenvalue is computed once per
 * segment rather than per step.
 */
TriggerDecision trigger_check(const Vec& e_trig, const Vec& e_s, const Vec& u,
                              const ControlConfig& cfg, double lambda_min_Q);

/**
 * Empirical Lipschitz estimate of a policy over a box: the max of
 * ||p(s1) - p(s2)|| / ||s1 - s2|| over `pairs` uniform samples, times
 * safety_factor.
 */
double estimate_policy_lipschitz(const std::function<Vec(const Vec&)>& policy, const Vec& lo,
                                 const Vec& hi, int pairs, std::mt19937_64& rng,
                                 double safety_factor = 2.0);

}  // namespace tlt::control
