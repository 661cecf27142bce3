#pragma once

#include <functional>

#include "tltrack/types.hpp"

namespace tlt::barrier {

/**
 * Scalar recentered log barrier on (c0, C0) with c0 < 0 < C0:
 *   b(q) = log((C0/c0) * (c0 - q) / (C0 - q)),  b(0) = 0,
 * strictly increasing, diverging to -inf/+inf at the interval ends.
 */
double value(double q, double c0, double C0);

/**
 * Inverse of the barrier, evaluated in the overflow-free form
 *   y >= 0:  c0*C0*(1 - e^-y) / (c0 - C0*e^-y)
 *   y <  0:  c0*C0*(e^y - 1)  / (c0*e^y - C0)
 * Saturates to the open interval ends for large |y|.
 */
double inverse(double y, double c0, double C0);

/**
 * d b^-1 / dy, positive everywhere, equal to c0*C0/(c0 - C0) at y = 0,
 * decaying to zero for large |y|. Evaluated without overflow.
 */
double inverse_deriv(double y, double c0, double C0);

/**
 * Coordinate change induced by a polytope {x : c <= A x + r <= C}:
 * s_i = b(a_i^T x + r_i) per row, x recovered through the left
 * pseudo-inverse of A. Requires full column rank and c < 0 < C.
 */
class BarrierMap {
 public:
  explicit BarrierMap(Box box);

  int n() const { return box_.dim(); }   // state dimension
  int m() const { return box_.rows(); }  // barrier-space dimension
  const Box& box() const { return box_; }

  /** x -> s; throws SafetyDomain naming the violated row when x is not interior. */
  Vec to_s(const Vec& x) const;

  /** s -> x = (A^T A)^-1 A^T (b^-1(s) - r). */
  Vec to_x(const Vec& s) const;

  /** Componentwise d b^-1/ds at s. */
  Vec inv_deriv(const Vec& s) const;

  /**
   * Barrier-space flow decomposition sdot = F(s) + G(s) u for the given
   * control-affine plant: F = D(s) A f(x(s)), G = D(s) A g(x(s)) with
   * D = diag(1 / b^-1'(s_i)).
   */
  void flow(const Vec& s, const Dynamics& plant, Vec& F, Mat& G) const;

 private:
  Box box_;
  Mat pinv_;  // (A^T A)^-1 A^T
};

/** sdot for a held input u; convenience over BarrierMap::flow. */
Vec transformed_dynamics(const Vec& s, const Vec& u, const Dynamics& plant, const BarrierMap& map);

/**
 * A reference trajectory pushed through the coordinate change: z_s(t) and the
 * transformed exosystem flow f_d(z_s) = D(z_s) A h(z(z_s)).
 */
class TransformedReference {
 public:
  TransformedReference(const BarrierMap& map, std::function<Vec(double)> z,
                       std::function<Vec(const Vec&)> h);

  Vec z(double t) const { return z_(t); }
  Vec z_s(double t) const;
  Vec f_d(const Vec& zs) const;

  /**
   * Samples z over [t0, t1] and throws SafetyDomain naming the first
   * offending time when the reference is not strictly inside the polytope.
   */
  void validate(double t0, double t1, int samples) const;

 private:
  const BarrierMap* map_;
  std::function<Vec(double)> z_;
  std::function<Vec(const Vec&)> h_;
};

}  // namespace tlt::barrier
