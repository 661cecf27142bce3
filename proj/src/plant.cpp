#include "tltrack/plant.hpp"

#include <cmath>

#include "tltrack/errors.hpp"

namespace tlt::plant {

Plant builtin_nl2d() {
  Plant p;
  p.id = "nl2d";
  p.dyn.n = 2;
  p.dyn.m_u = 1;
  p.dyn.f = [](const Vec& x) {
    double c = std::cos(2.0 * x[0]) + 2.0;
    Vec out(2);
    out[0] = -x[0] + x[1];
    out[1] = -0.5 * x[0] - 0.5 * x[1] * (1.0 - c * c);
    return out;
  };
  p.dyn.g = [](const Vec& x) {
    Mat out(2, 1);
    out(0, 0) = 0.0;
    out(1, 0) = std::cos(2.0 * x[0]) + 2.0;
    return out;
  };
  return p;
}

Exosystem builtin_circle(double radius, double omega) {
  if (radius <= 0.0) throw input_error("circle reference requires a positive radius");
  Exosystem e;
  e.id = "circle";
  e.dim = 2;
  e.h = [omega](const Vec& z) {
    Vec out(2);
    out[0] = omega * z[1];
    out[1] = -omega * z[0];
    return out;
  };
  e.z_closed = [radius, omega](double t) {
    Vec out(2);
    out[0] = radius * std::sin(omega * t);
    out[1] = radius * std::cos(omega * t);
    return out;
  };
  e.z0 = e.z_closed(0.0);
  return e;
}

Exosystem builtin_static(Vec point) {
  Exosystem e;
  e.id = "static";
  e.dim = static_cast<int>(point.size());
  int dim = e.dim;
  e.h = [dim](const Vec&) -> Vec { return Vec::Zero(dim); };
  Vec p = point;
  e.z_closed = [p](double) { return p; };
  e.z0 = std::move(point);
  e.is_static = true;
  return e;
}

AugmentedSystem::AugmentedSystem(const barrier::BarrierMap& map, Dynamics plant,
                                 barrier::TransformedReference ref)
    : map_(&map), plant_(std::move(plant)), ref_(std::move(ref)) {
  if (plant_.n != map_->n()) throw input_error("AugmentedSystem: plant/polytope dimension mismatch");
}

Vec AugmentedSystem::f_aug(const Vec& s_aug) const {
  const int m = map_->m();
  if (s_aug.size() != 2 * m) throw input_error("f_aug: s_aug dimension mismatch");
  Vec s = s_aug.head(m) + s_aug.tail(m);
  Vec F;
  Mat G;
  map_->flow(s, plant_, F, G);
  Vec fd = ref_.f_d(s_aug.tail(m));
  Vec out(2 * m);
  out.head(m) = F - fd;
  out.tail(m) = fd;
  return out;
}

Mat AugmentedSystem::g_aug(const Vec& s_aug) const {
  const int m = map_->m();
  if (s_aug.size() != 2 * m) throw input_error("g_aug: s_aug dimension mismatch");
  Vec s = s_aug.head(m) + s_aug.tail(m);
  Vec F;
  Mat G;
  map_->flow(s, plant_, F, G);
  Mat out = Mat::Zero(2 * m, plant_.m_u);
  out.topRows(m) = G;
  return out;
}

Vec AugmentedSystem::deriv(const Vec& s_aug, const Vec& u) const {
  const int m = map_->m();
  if (s_aug.size() != 2 * m) throw input_error("deriv: s_aug dimension mismatch");
  if (u.size() != plant_.m_u) throw input_error("deriv: input dimension mismatch");
  Vec s = s_aug.head(m) + s_aug.tail(m);
  Vec F;
  Mat G;
  map_->flow(s, plant_, F, G);
  Vec fd = ref_.f_d(s_aug.tail(m));
  Vec out(2 * m);
  out.head(m) = F + G * u - fd;
  out.tail(m) = fd;
  return out;
}

Vec AugmentedSystem::lift(const Vec& x, double t) const {
  Vec s = map_->to_s(x);
  Vec zs = ref_.z_s(t);
  Vec out(2 * map_->m());
  out.head(map_->m()) = s - zs;
  out.tail(map_->m()) = zs;
  return out;
}

}  // namespace tlt::plant
