#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tltrack/types.hpp"

namespace tlt::expr {

/**
 * Tiny arithmetic expression language for user-supplied dynamics:
 * numbers, named variables, + - * / ^, unary minus, parentheses, and the
 * functions sin, cos, tanh, log, exp. Variables are bound to slots at
 * compile time, so evaluation is a single allocation-free tree walk.
 */
class Compiled {
 public:
  double eval(const double* vars) const;
  double eval(const std::vector<double>& vars) const;

  struct Node;

 private:
  friend Compiled compile(const std::string&, const std::vector<std::string>&);
  std::shared_ptr<const Node> root_;
};

/**
 * Compile `text` against the variable names in `vars` (slot order).
 * Unknown identifiers and syntax errors throw InvalidInput with a position.
 */
Compiled compile(const std::string& text, const std::vector<std::string>& vars);

/**
 * A vector of expressions over variables x1..xn (plus optionally t), bundled
 * as a callable for dynamics plumbing.
 */
class VectorField {
 public:
  VectorField() = default;
  VectorField(const std::vector<std::string>& exprs, const std::vector<std::string>& vars);

  int size() const { return static_cast<int>(rows_.size()); }
  Vec operator()(const Vec& v) const;
  Vec eval_with_time(const Vec& v, double t) const;  // t appended as the last slot

 private:
  std::vector<Compiled> rows_;
  size_t nvars_ = 0;
  bool with_time_ = false;
};

}  // namespace tlt::expr
