#include "tltrack/barrier.hpp"

#include <cmath>

#include "tltrack/errors.hpp"

namespace tlt::barrier {

double value(double q, double c0, double C0) {
  if (!(c0 < 0.0 && 0.0 < C0)) throw input_error("barrier requires c0 < 0 < C0");
  if (!(q > c0 && q < C0)) {
    throw domain_error("barrier argument " + std::to_string(q) + " outside (" +
                       std::to_string(c0) + ", " + std::to_string(C0) + ")");
  }
  return std::log((C0 / c0) * (c0 - q) / (C0 - q));
}

double inverse(double y, double c0, double C0) {
  if (!(c0 < 0.0 && 0.0 < C0)) throw input_error("barrier requires c0 < 0 < C0");
  double q;
  if (y >= 0.0) {
    double e = std::exp(-y);
    q = c0 * C0 * (1.0 - e) / (c0 - C0 * e);
  } else {
    double e = std::exp(y);
    q = c0 * C0 * (e - 1.0) / (c0 * e - C0);
  }
  // For very large |y| the quotient rounds onto the bound itself. The image
  // has to stay strictly interior, so pull such results in by one ulp.
  if (q >= C0) q = std::nextafter(C0, c0);
  if (q <= c0) q = std::nextafter(c0, C0);
  return q;
}

double inverse_deriv(double y, double c0, double C0) {
  if (!(c0 < 0.0 && 0.0 < C0)) throw input_error("barrier requires c0 < 0 < C0");
  // (C0 c0^2 - c0 C0^2) / (c0^2 e^y - 2 c0 C0 + C0^2 e^-y), scaled by e^-|y|
  // so neither exponential can overflow.
  double num = c0 * C0 * (c0 - C0);
  if (y >= 0.0) {
    double e = std::exp(-y);
    return num * e / (c0 * c0 - 2.0 * c0 * C0 * e + C0 * C0 * e * e);
  }
  double e = std::exp(y);
  return num * e / (c0 * c0 * e * e - 2.0 * c0 * C0 * e + C0 * C0);
}

BarrierMap::BarrierMap(Box box) : box_(std::move(box)) {
  const int m = box_.rows();
  const int n = box_.dim();
  if (m == 0 || n == 0) throw input_error("BarrierMap: empty polytope");
  if (box_.r.size() != m || box_.c.size() != m || box_.C.size() != m) {
    throw input_error("BarrierMap: A, r, c, C row counts disagree");
  }
  if (m < n) throw input_error("BarrierMap: A must have at least as many rows as columns");
  for (int i = 0; i < m; ++i) {
    if (!(box_.c[i] < 0.0 && 0.0 < box_.C[i])) {
      throw input_error("BarrierMap: row " + std::to_string(i) + " violates c < 0 < C");
    }
  }
  Eigen::JacobiSVD<Mat> svd(box_.A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  if (svd.rank() < n) {
    throw input_error("BarrierMap: A is rank deficient (rank " + std::to_string(svd.rank()) +
                      " < " + std::to_string(n) + ")");
  }
  pinv_ = (box_.A.transpose() * box_.A).ldlt().solve(box_.A.transpose());
}

Vec BarrierMap::to_s(const Vec& x) const {
  if (x.size() != n()) throw input_error("to_s: state dimension mismatch");
  Vec q = box_.q(x);
  Vec s(m());
  for (int i = 0; i < m(); ++i) {
    if (!(q[i] > box_.c[i] && q[i] < box_.C[i])) {
      throw domain_error("state outside the safety polytope interior at row " + std::to_string(i) +
                         " (q=" + std::to_string(q[i]) + ", bounds (" + std::to_string(box_.c[i]) +
                         ", " + std::to_string(box_.C[i]) + "))");
    }
    s[i] = value(q[i], box_.c[i], box_.C[i]);
  }
  return s;
}

Vec BarrierMap::to_x(const Vec& s) const {
  if (s.size() != m()) throw input_error("to_x: barrier dimension mismatch");
  Vec q(m());
  for (int i = 0; i < m(); ++i) q[i] = inverse(s[i], box_.c[i], box_.C[i]);
  return pinv_ * (q - box_.r);
}

Vec BarrierMap::inv_deriv(const Vec& s) const {
  if (s.size() != m()) throw input_error("inv_deriv: barrier dimension mismatch");
  Vec d(m());
  for (int i = 0; i < m(); ++i) d[i] = inverse_deriv(s[i], box_.c[i], box_.C[i]);
  return d;
}

void BarrierMap::flow(const Vec& s, const Dynamics& plant, Vec& F, Mat& G) const {
  if (plant.n != n()) throw input_error("flow: plant dimension mismatch");
  Vec x = to_x(s);
  Vec d = inv_deriv(s);
  Vec fv = plant.f(x);
  Mat gv = plant.g(x);
  if (fv.size() != n() || gv.rows() != n() || gv.cols() != plant.m_u) {
    throw input_error("flow: plant callbacks returned wrong dimensions");
  }
  F = (box_.A * fv).cwiseQuotient(d);
  G = d.cwiseInverse().asDiagonal() * (box_.A * gv);
}

Vec transformed_dynamics(const Vec& s, const Vec& u, const Dynamics& plant, const BarrierMap& map) {
  if (u.size() != plant.m_u) throw input_error("transformed_dynamics: input dimension mismatch");
  Vec F;
  Mat G;
  map.flow(s, plant, F, G);
  return F + G * u;
}

TransformedReference::TransformedReference(const BarrierMap& map, std::function<Vec(double)> z,
                                           std::function<Vec(const Vec&)> h)
    : map_(&map), z_(std::move(z)), h_(std::move(h)) {
  if (!z_ || !h_) throw input_error("TransformedReference: both z(t) and h(z) are required");
}

Vec TransformedReference::z_s(double t) const { return map_->to_s(z_(t)); }

Vec TransformedReference::f_d(const Vec& zs) const {
  Vec z = map_->to_x(zs);
  Vec hz = h_(z);
  if (hz.size() != map_->n()) throw input_error("f_d: exosystem flow has wrong dimension");
  return (map_->box().A * hz).cwiseQuotient(map_->inv_deriv(zs));
}

void TransformedReference::validate(double t0, double t1, int samples) const {
  for (int i = 0; i <= samples; ++i) {
    double t = t0 + (t1 - t0) * i / samples;
    if (!map_->box().contains(z_(t), true)) {
      throw domain_error("reference leaves the safety polytope at t=" + std::to_string(t));
    }
  }
}

}  // namespace tlt::barrier
