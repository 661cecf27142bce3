#pragma once

#include <string>

#include "tltrack/barrier.hpp"
#include "tltrack/types.hpp"

namespace tlt::plant {

/** Named control-affine plant xdot = f(x) + g(x) u. */
struct Plant {
  std::string id;
  Dynamics dyn;

  int n() const { return dyn.n; }
  int m_u() const { return dyn.m_u; }
};

/**
 * Autonomous reference generator zdot = h(z). When a closed form z(t) is
 * known it is preferred over integrating h. `is_static` marks constant
 * references (h identically zero).
 */
struct Exosystem {
  std::string id;
  int dim = 0;
  std::function<Vec(const Vec&)> h;
  std::function<Vec(double)> z_closed;  // may be empty
  Vec z0;
  bool is_static = false;

  bool has_closed() const { return static_cast<bool>(z_closed); }
};

/**
 * Bundled two-state nonlinear benchmark plant with saturating actuation
 * channel g = [0, cos(2 x1) + 2]^T:
 *   x1dot = -x1 + x2
 *   x2dot = -0.5 x1 - 0.5 x2 (1 - (cos(2 x1) + 2)^2) + (cos(2 x1) + 2) u
 */
Plant builtin_nl2d();

/** Circle reference z(t) = radius [sin(omega t), cos(omega t)], h = omega [z2, -z1]. */
Exosystem builtin_circle(double radius = 0.5, double omega = 0.5);

/** Constant reference z(t) = point, h = 0. */
Exosystem builtin_static(Vec point);

/**
 * Tracking error system in barrier coordinates. With s_aug = [e_s; z_s]:
 *   e_sdot = F(e_s + z_s) + G(e_s + z_s) u - f_d(z_s)
 *   z_sdot = f_d(z_s)
 * F_aug stacks the drift, G_aug stacks [G; 0].
 */
class AugmentedSystem {
 public:
  AugmentedSystem(const barrier::BarrierMap& map, Dynamics plant,
                  barrier::TransformedReference ref);

  int m() const { return map_->m(); }
  int dim() const { return 2 * map_->m(); }  // size of s_aug
  int m_u() const { return plant_.m_u; }
  const barrier::BarrierMap& map() const { return *map_; }
  const barrier::TransformedReference& ref() const { return ref_; }
  const Dynamics& plant() const { return plant_; }

  Vec f_aug(const Vec& s_aug) const;
  Mat g_aug(const Vec& s_aug) const;

  /** f_aug + g_aug u. */
  Vec deriv(const Vec& s_aug, const Vec& u) const;

  /** Assemble s_aug from the plant state and the reference at time t. */
  Vec lift(const Vec& x, double t) const;

 private:
  const barrier::BarrierMap* map_;
  Dynamics plant_;
  barrier::TransformedReference ref_;
};

}  // namespace tlt::plant
