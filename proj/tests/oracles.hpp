#pragma once

// Reference computations for the tests. Everything here is deliberately
// written with a different method than the library (quadrature instead of
// closed forms, finite differences instead of analytic derivatives, literal
// recursion instead of the trace dynamic program) so that agreement between
// the two is evidence rather than tautology.

#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tltrack/ltl.hpp"
#include "tltrack/types.hpp"

namespace oracle {

// Composite Simpson, doubling the panel count until two refinements agree.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  auto simpson = [&](int n) {
    double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
  };
  double prev = simpson(16);
  for (int n = 32; n <= (1 << 22); n *= 2) {
    double cur = simpson(n);
    if (std::abs(cur - prev) <= tol) return cur;
    prev = cur;
  }
  return prev;
}

// Five-point central difference, O(h^4).
inline double deriv(const std::function<double(double)>& f, double x, double h = 1e-4) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

// Componentwise directional finite difference of a vector field.
inline tlt::Vec jac_col(const std::function<tlt::Vec(const tlt::Vec&)>& f, const tlt::Vec& x,
                        int col, double h = 1e-6) {
  tlt::Vec lo = x, hi = x;
  lo[col] -= h;
  hi[col] += h;
  return (f(hi) - f(lo)) / (2 * h);
}

// Finite-trace LTL by literal recursion over suffix positions, the textbook
// quantifier definitions. `weak` only changes "next" at the trace end.
inline bool ltl_holds(const tlt::ltl::Formula& f, const tlt::ltl::Trace& tr, size_t i,
                      bool weak) {
  using tlt::ltl::Kind;
  const size_t n = tr.size();
  switch (f.kind) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Atom:
      return i < n && tr[i].v.at(f.atom);
    case Kind::NegAtom:
      return i < n && !tr[i].v.at(f.atom);
    case Kind::And:
      for (const auto& c : f.children)
        if (!ltl_holds(c, tr, i, weak)) return false;
      return true;
    case Kind::Or:
      for (const auto& c : f.children)
        if (ltl_holds(c, tr, i, weak)) return true;
      return false;
    case Kind::Next:
      if (i + 1 >= n) return weak;
      return ltl_holds(f.children[0], tr, i + 1, weak);
    case Kind::Eventually:
      for (size_t j = i; j < n; ++j)
        if (ltl_holds(f.children[0], tr, j, weak)) return true;
      return false;
    case Kind::Always:
      for (size_t j = i; j < n; ++j)
        if (!ltl_holds(f.children[0], tr, j, weak)) return false;
      return true;
    case Kind::Until:
      for (size_t j = i; j < n; ++j) {
        if (ltl_holds(f.children[1], tr, j, weak)) return true;
        if (!ltl_holds(f.children[0], tr, j, weak)) return false;
      }
      return false;
  }
  std::abort();
}

// Entry points for nonempty traces (position-based semantics need a first
// position; the library's empty-trace convention is unit-tested separately).
inline bool ltl_strong(const tlt::ltl::Formula& f, const tlt::ltl::Trace& tr) {
  if (tr.empty()) throw std::logic_error("oracle::ltl_strong needs a nonempty trace");
  return ltl_holds(f, tr, 0, false);
}

inline bool ltl_weak(const tlt::ltl::Formula& f, const tlt::ltl::Trace& tr) {
  if (tr.empty()) throw std::logic_error("oracle::ltl_weak needs a nonempty trace");
  return ltl_holds(f, tr, 0, true);
}

// Every formula in negation normal form over the given atoms with at most
// `max_nodes` nodes, enumerated smallest-first. Grows fast; keep the budget
// small.
inline std::vector<tlt::ltl::Formula> enumerate_formulas(const std::vector<std::string>& atoms,
                                                         int max_nodes) {
  using namespace tlt::ltl;
  std::vector<std::vector<Formula>> by_size(max_nodes + 1);
  by_size[1].push_back(f_true());
  by_size[1].push_back(f_false());
  for (const auto& a : atoms) {
    by_size[1].push_back(f_atom(a));
    by_size[1].push_back(f_neg_atom(a));
  }
  for (int sz = 2; sz <= max_nodes; ++sz) {
    for (const auto& c : by_size[sz - 1]) {
      by_size[sz].push_back(f_next(c));
      by_size[sz].push_back(f_eventually(c));
      by_size[sz].push_back(f_always(c));
    }
    for (int left = 1; left <= sz - 2; ++left) {
      for (const auto& a : by_size[left]) {
        for (const auto& b : by_size[sz - 1 - left]) {
          by_size[sz].push_back(f_and({a, b}));
          by_size[sz].push_back(f_or({a, b}));
          by_size[sz].push_back(f_until(a, b));
        }
      }
    }
  }
  std::vector<Formula> out;
  for (auto& bucket : by_size)
    for (auto& f : bucket) out.push_back(std::move(f));
  return out;
}

// All traces over the given atoms with length in [min_len, max_len].
inline std::vector<tlt::ltl::Trace> enumerate_traces(const std::vector<std::string>& atoms,
                                                     int min_len, int max_len) {
  const int nv = 1 << atoms.size();
  std::vector<tlt::ltl::Trace> out;
  std::function<void(tlt::ltl::Trace&)> grow = [&](tlt::ltl::Trace& tr) {
    int len = static_cast<int>(tr.size());
    if (len >= min_len) out.push_back(tr);
    if (len == max_len) return;
    for (int v = 0; v < nv; ++v) {
      tlt::ltl::TraceStep step;
      step.t = static_cast<double>(len);
      for (size_t b = 0; b < atoms.size(); ++b) step.v[atoms[b]] = (v >> b) & 1;
      tr.push_back(step);
      grow(tr);
      tr.pop_back();
    }
  };
  tlt::ltl::Trace tr;
  grow(tr);
  return out;
}

}  // namespace oracle
