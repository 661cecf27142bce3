#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace tlt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/**
 * Axis-general polytope {x : c <= A x + r <= C}, one barrier coordinate per row.
 * A is m x n with full column rank, c < 0 < C elementwise so that the row
 * origin q = 0 lies strictly inside every slab.
 */
struct Box {
  Mat A;
  Vec r;
  Vec c;
  Vec C;

  int rows() const { return static_cast<int>(A.rows()); }
  int dim() const { return static_cast<int>(A.cols()); }

  /** Row values q = A x + r. */
  Vec q(const Vec& x) const { return A * x + r; }

  /** Membership test; strict=true demands the open interior. */
  bool contains(const Vec& x, bool strict = false) const {
    Vec v = q(x);
    for (int i = 0; i < v.size(); ++i) {
      if (strict ? (v[i] <= c[i] || v[i] >= C[i]) : (v[i] < c[i] || v[i] > C[i])) return false;
    }
    return true;
  }

  /** Smallest distance from q(x) to the slab faces; negative outside. */
  double margin(const Vec& x) const {
    Vec v = q(x);
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < v.size(); ++i) m = std::min({m, v[i] - c[i], C[i] - v[i]});
    return m;
  }
};

/** Control-affine dynamics xdot = f(x) + g(x) u. */
struct Dynamics {
  int n = 0;
  int m_u = 0;
  std::function<Vec(const Vec&)> f;
  std::function<Mat(const Vec&)> g;
};

}  // namespace tlt
