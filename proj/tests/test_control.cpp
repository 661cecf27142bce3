#include <cmath>
#include <random>

#include "framework.hpp"
#include "oracles.hpp"
#include "tltrack/barrier.hpp"
#include "tltrack/control.hpp"
#include "tltrack/errors.hpp"
#include "tltrack/plant.hpp"

using namespace tlt;
using namespace tlt::control;

namespace {

Vec vec1(double v) {
  Vec u(1);
  u << v;
  return u;
}

// The penalty is by definition the integral of gamma1*lambda*atanh(v/lambda)
// per channel; reproduce it by quadrature.
double penalty_by_quadrature(double u, double lambda, double gamma1) {
  return oracle::integrate(
      [&](double v) { return gamma1 * lambda * std::atanh(v / lambda); }, 0.0, u);
}

}  // namespace

TEST(control, penalty_values) {
  CHECK_NEAR(penalty(Vec::Zero(3), 5.0, 1.0), 0.0, 0.0);
  // even in each channel
  CHECK_NEAR(penalty(vec1(-0.7), 5.0, 1.0), penalty(vec1(0.7), 5.0, 1.0), 0.0);

  CHECK_NEAR(penalty(vec1(0.5), 1.0, 1.0), penalty_by_quadrature(0.5, 1.0, 1.0), 1e-9);
  CHECK_NEAR(penalty(vec1(2.0), 5.0, 1.0), penalty_by_quadrature(2.0, 5.0, 1.0), 1e-9);
  CHECK_NEAR(penalty(vec1(-4.9), 5.0, 0.02), penalty_by_quadrature(-4.9, 5.0, 0.02), 1e-9);
  CHECK_NEAR(penalty(vec1(19.0), 20.0, 0.02), penalty_by_quadrature(19.0, 20.0, 0.02), 1e-9);

  // channels add up
  Vec two(2);
  two << 1.3, -2.6;
  CHECK_NEAR(penalty(two, 5.0, 1.0),
             penalty(vec1(1.3), 5.0, 1.0) + penalty(vec1(-2.6), 5.0, 1.0), 1e-14);

  // approach to the saturation bound: gamma1 lambda^2 log 2 per channel
  double lambda = 5.0, gamma1 = 1.0;
  double limit = gamma1 * lambda * lambda * std::log(2.0);
  double at_edge = penalty(vec1(lambda * (1.0 - 1e-12)), lambda, gamma1);
  CHECK_NEAR(at_edge, limit, 1e-6 * limit);
  CHECK(at_edge < limit);

  CHECK_THROWS_EX(penalty(vec1(5.0), 5.0, 1.0), Error, e.code() == ErrorCode::SafetyDomain);
  CHECK_THROWS_EX(penalty(vec1(-5.1), 5.0, 1.0), Error, e.code() == ErrorCode::SafetyDomain);
}

TEST(control, clamp_input) {
  const double lambda = 5.0;
  const double bound = lambda * (1.0 - 1e-9);
  Vec u(3);
  u << 10.0, -7.0, 1.25;
  Vec c = clamp_input(u, lambda);
  CHECK_NEAR(c[0], bound, 0.0);
  CHECK_NEAR(c[1], -bound, 0.0);
  CHECK_NEAR(c[2], 1.25, 0.0);  // interior components untouched
}

TEST(control, saturated_policy) {
  // scalar channel arranged so the tanh argument is exactly 1
  Mat G(2, 1);
  G << 1.0, 0.0;
  Vec gradV(2);
  gradV << 1.0, 3.7;  // second entry multiplies the zero row
  double lambda = 5.0, gamma1 = 0.1;
  Vec u = saturated_policy(G, gradV, lambda, gamma1);
  CHECK_EQ(u.size(), Eigen::Index{1});
  CHECK_NEAR(u[0], -5.0 * std::tanh(1.0), 1e-12);

  // zero gradient: zero input, exactly
  CHECK(saturated_policy(G, Vec::Zero(2), lambda, gamma1).norm() == 0.0);

  // enormous gradient saturates but stays strictly below the bound
  gradV << 1e9, 0.0;
  u = saturated_policy(G, gradV, lambda, gamma1);
  CHECK(std::abs(u[0]) < lambda);
  CHECK(std::abs(u[0]) > 0.999 * lambda);

  // the policy inverts back to its argument while unsaturated
  for (double w : {-3.0, -0.4, 0.2, 2.5}) {
    gradV << w, 0.0;
    u = saturated_policy(G, gradV, lambda, gamma1);
    CHECK_NEAR(-2.0 * gamma1 * lambda * std::atanh(u[0] / lambda), w, 1e-9);
  }

  CHECK_THROWS_EX(saturated_policy(G, Vec::Zero(3), lambda, gamma1), Error,
                  e.code() == ErrorCode::InvalidInput);
}

TEST(control, trigger_threshold_hand_value) {
  // (beta, lmin(Q), L, lambda, gamma1) = (0.5, 800, 10, 5, 1):
  // threshold = ((1/2 - 1/4) * 800 * ||e_s||^2 + R(u)) / (100 * 5 * 1)
  //           = 0.4 ||e_s||^2 + R(u) / 500
  ControlConfig cfg;
  cfg.lambda = 5.0;
  cfg.gamma1 = 1.0;
  cfg.beta = 0.5;
  cfg.L = 10.0;
  cfg.Q = 800.0 * Mat::Identity(2, 2);

  Vec e_s(2);
  e_s << 1.0, 0.0;
  auto d = trigger_check(Vec::Zero(2), e_s, vec1(0.0), cfg, cfg.lambda_min_Q());
  CHECK_NEAR(d.threshold, 0.4, 1e-12);
  CHECK(!d.fire);

  e_s << 0.3, -1.1;
  double u = 2.0;
  double r_u = 1.0 * (5.0 * u * std::atanh(u / 5.0) +
                      0.5 * 25.0 * std::log1p(-(u / 5.0) * (u / 5.0)));
  d = trigger_check(Vec::Zero(2), e_s, vec1(u), cfg, cfg.lambda_min_Q());
  CHECK_NEAR(d.threshold, 0.4 * e_s.squaredNorm() + r_u / 500.0, 1e-12);
}

TEST(control, trigger_fire_boundary) {
  ControlConfig cfg;
  cfg.lambda = 5.0;
  cfg.gamma1 = 1.0;
  cfg.beta = 0.5;
  cfg.L = 10.0;
  cfg.Q = 800.0 * Mat::Identity(2, 2);
  double lmin = cfg.lambda_min_Q();

  Vec e_s(2);
  e_s << 1.0, 0.0;  // threshold 0.4
  Vec e_trig(2);
  e_trig << std::sqrt(0.4) + 1e-8, 0.0;
  auto d = trigger_check(e_trig, e_s, vec1(0.0), cfg, lmin);
  CHECK(d.fire);
  CHECK_NEAR(d.lhs, e_trig.squaredNorm(), 0.0);
  e_trig << std::sqrt(0.4) - 1e-8, 0.0;
  CHECK(!trigger_check(e_trig, e_s, vec1(0.0), cfg, lmin).fire);

  // zero sampling error can never fire, even with a zero budget
  CHECK(!trigger_check(Vec::Zero(2), Vec::Zero(2), vec1(0.0), cfg, lmin).fire);

  // the budget grows monotonically with the tracking error
  double prev = -1.0;
  for (double n = 0.0; n <= 3.0; n += 0.25) {
    e_s << n, 0.0;
    double th = trigger_check(Vec::Zero(2), e_s, vec1(0.0), cfg, lmin).threshold;
    CHECK(th >= prev);
    prev = th;
  }
}

TEST(control, config_validation) {
  ControlConfig good;
  good.lambda = 5.0;
  good.gamma1 = 1.0;
  good.gamma = 0.01;
  good.beta = 0.5;
  good.L = 10.0;
  good.Q = 800.0 * Mat::Identity(2, 2);
  good.validate(2);  // must not throw
  CHECK_NEAR(good.lambda_min_Q(), 800.0, 1e-9);

  auto expect_reject = [&](void (*mutate)(ControlConfig&)) {
    ControlConfig bad = good;
    mutate(bad);
    CHECK_THROWS_EX(bad.validate(2), Error, e.code() == ErrorCode::InvalidInput);
  };
  expect_reject([](ControlConfig& c) { c.lambda = 0.0; });
  expect_reject([](ControlConfig& c) { c.gamma1 = -1.0; });
  expect_reject([](ControlConfig& c) { c.gamma = -0.5; });
  expect_reject([](ControlConfig& c) { c.beta = 0.0; });
  expect_reject([](ControlConfig& c) { c.beta = 0.71; });  // 1/sqrt(2) ~ 0.7071
  expect_reject([](ControlConfig& c) { c.L = 0.0; });
  expect_reject([](ControlConfig& c) { c.Q = Mat::Identity(3, 3); });
  expect_reject([](ControlConfig& c) { c.Q(0, 1) = 5.0; });  // asymmetric
  expect_reject([](ControlConfig& c) { c.Q = -Mat::Identity(2, 2); });

  ControlConfig uneven = good;
  uneven.Q = Mat::Identity(2, 2);
  uneven.Q(0, 0) = 700.0;
  uneven.Q(1, 1) = 800.0;
  CHECK_NEAR(uneven.lambda_min_Q(), 700.0, 1e-9);
}

TEST(control, hamiltonian_recomposition) {
  Box box;
  box.A = Mat::Identity(2, 2);
  box.r = Vec::Zero(2);
  box.c = Vec::Constant(2, -30.0);
  box.C = Vec::Constant(2, 30.0);
  barrier::BarrierMap map(box);
  plant::Plant p = plant::builtin_nl2d();
  plant::Exosystem circ = plant::builtin_circle(0.5, 0.5);
  plant::AugmentedSystem sys(map, p.dyn, barrier::TransformedReference(map, circ.z_closed, circ.h));

  ControlConfig cfg;
  cfg.lambda = 5.0;
  cfg.gamma1 = 1.0;
  cfg.gamma = 2.0;
  cfg.Q = 800.0 * Mat::Identity(2, 2);

  Vec x0(2);
  x0 << 1.5, -1.0;
  Vec s_aug = sys.lift(x0, 0.0);
  Vec gradV(4);
  gradV << 0.4, -1.2, 0.05, 0.3;
  double V = 2.5;
  Vec u = vec1(0.7);

  double H = hamiltonian(s_aug, u, V, gradV, sys, cfg);
  Vec e_s = s_aug.head(2);
  double expected = gradV.dot(sys.deriv(s_aug, u)) +
                    0.5 * (e_s.dot(cfg.Q * e_s) + penalty(u, cfg.lambda, cfg.gamma1) -
                           2.0 * cfg.gamma * V);
  CHECK_NEAR(H, expected, 1e-12);

  // all-zero corner: on-reference state, zero input, zero value estimate
  Vec on_ref = map.to_x(sys.ref().z_s(0.0));
  Vec s0 = sys.lift(on_ref, 0.0);
  Vec gz = Vec::Zero(4);
  double H0 = hamiltonian(s0, vec1(0.0), 0.0, gz, sys, cfg);
  CHECK_NEAR(H0, 0.5 * s0.head(2).dot(cfg.Q * s0.head(2)), 1e-9);
  CHECK(std::abs(H0) < 1e-9);  // e_s vanishes on the reference

  CHECK_THROWS_EX(hamiltonian(s_aug, u, V, Vec::Zero(3), sys, cfg), Error,
                  e.code() == ErrorCode::InvalidInput);
}

TEST(control, lipschitz_estimate) {
  // a linear map has one slope everywhere: the estimate must recover it
  // (times the safety factor) regardless of sampling
  auto policy = [](const Vec& s) -> Vec { return 3.0 * s; };
  Vec lo = Vec::Constant(2, -1.0);
  Vec hi = Vec::Constant(2, 1.0);
  std::mt19937_64 rng(7);
  double est = estimate_policy_lipschitz(policy, lo, hi, 400, rng, 2.0);
  CHECK_NEAR(est, 6.0, 1e-9);

  std::mt19937_64 rng2(7);
  double est2 = estimate_policy_lipschitz(policy, lo, hi, 400, rng2, 1.0);
  CHECK_NEAR(est2, 3.0, 1e-9);

  CHECK_THROWS_EX(estimate_policy_lipschitz(policy, lo, Vec::Ones(3), 10, rng, 2.0), Error,
                  e.code() == ErrorCode::InvalidInput);
}
