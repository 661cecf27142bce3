#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "tltrack/types.hpp"

namespace tlt::ltl {

/**
 * Formula AST in negation normal form by construction: negation exists only
 * as NegAtom. False never comes out of the parser for user text other than
 * the literal "false"; it mostly arises as a progression residual.
 */
enum class Kind { True, False, Atom, NegAtom, And, Or, Next, Eventually, Until, Always };

struct Formula {
  Kind kind = Kind::True;
  std::string atom;               // Atom / NegAtom only
  std::vector<Formula> children;  // And/Or: >=2, Next/Eventually/Always: 1, Until: 2

  bool operator==(const Formula& o) const;
  bool is_true() const { return kind == Kind::True; }
  bool is_false() const { return kind == Kind::False; }
};

Formula f_true();
Formula f_false();
Formula f_atom(std::string name);
Formula f_neg_atom(std::string name);
Formula f_and(std::vector<Formula> cs);
Formula f_or(std::vector<Formula> cs);
Formula f_next(Formula f);
Formula f_eventually(Formula f);
Formula f_until(Formula a, Formula b);
Formula f_always(Formula f);

/** Render with minimal parentheses; parse(to_string(f)) is structurally f. */
std::string to_string(const Formula& f);

/**
 * Parse the ASCII syntax: atoms, true, false, ! (atoms only), &, |,
 * X, F, G, U. Precedence | < & < U < unary, U right-associative.
 * Throws InvalidInput with a byte position on syntax errors and when
 * ! is applied to a non-atom.
 */
Formula parse_formula(const std::string& text);

enum class Fragment { CoSafe, Safe, Both, Neither };

/**
 * Fragment of the operator set actually used: co-safe excludes Always,
 * safe excludes Eventually and Until. Formulas using both are Neither.
 */
Fragment classify(const Formula& f);

bool is_co_safe(const Formula& f);
bool is_safe(const Formula& f);

/** parse_formula plus a fragment check; throws on violation. */
Formula parse_co_safe(const std::string& text);
Formula parse_safe(const std::string& text);

/** Sorted unique atom names appearing in f. */
std::vector<std::string> atoms(const Formula& f);

/**
 * Canonical syntactic simplification: constant folding, flattening of
 * nested And/Or, duplicate elimination, children sorted by rendering.
 * No Boolean minimization beyond that.
 */
Formula simplify(const Formula& f);

using Valuation = std::map<std::string, bool>;

/**
 * One-step formula progression: the residual obligation after observing v.
 * Every atom of f must be assigned in v. The result is simplified.
 */
Formula progress(const Formula& f, const Valuation& v);

struct TraceStep {
  double t = 0.0;
  Valuation v;
};
using Trace = std::vector<TraceStep>;

/**
 * Finite-trace semantics. Co-safe formulas use strong semantics (the prefix
 * itself must witness satisfaction; Next past the end is false). Safe-only
 * formulas use weak semantics (satisfied unless the prefix witnesses a
 * violation; Next past the end is true). Formulas in neither fragment are
 * rejected.
 */
bool satisfies(const Trace& trace, const Formula& f);

/** Strong / weak evaluation with the semantics chosen explicitly. */
bool satisfies_strong(const Trace& trace, const Formula& f);
bool satisfies_weak(const Trace& trace, const Formula& f);

/** Tracking predicate: ||x - z(t)||_2 <= eps for a named reference. */
struct TrackBall {
  std::string trajectory;
  double eps = 0.0;
};

/** Polytope membership c <= A x + r <= C, closed. */
struct BoxMembership {
  Box box;
};

using Predicate = std::variant<TrackBall, BoxMembership>;
using PredicateTable = std::map<std::string, Predicate>;

using TrajectoryFn = std::function<Vec(double)>;
using TrajectoryTable = std::map<std::string, TrajectoryFn>;

/**
 * Evaluate a predicate at state x, time t. TrackBall looks its reference up
 * in refs and uses the closed ball; BoxMembership ignores refs and t.
 * Unknown trajectory ids and dimension mismatches throw InvalidInput.
 */
bool eval_predicate(const Predicate& p, const Vec& x, double t, const TrajectoryTable& refs);

}  // namespace tlt::ltl
