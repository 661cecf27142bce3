#include <map>

#include "framework.hpp"
#include "oracles.hpp"
#include "tltrack/errors.hpp"
#include "tltrack/ltl.hpp"

using namespace tlt;
using namespace tlt::ltl;

namespace {

Valuation val2(bool p1, bool p2) { return {{"p1", p1}, {"p2", p2}}; }

Trace trace_of(std::initializer_list<Valuation> vs) {
  Trace tr;
  double t = 0.0;
  for (const auto& v : vs) tr.push_back({t++, v});
  return tr;
}

}  // namespace

TEST(ltl, parse_mission_formula_shape) {
  Formula f = parse_formula("F p2 & (!p2 U p1)");
  CHECK(f.kind == Kind::And);
  CHECK_EQ(f.children.size(), size_t{2});
  const Formula& ev = f.children[0];
  CHECK(ev.kind == Kind::Eventually);
  CHECK(ev.children[0].kind == Kind::Atom);
  CHECK_EQ(ev.children[0].atom, "p2");
  const Formula& until = f.children[1];
  CHECK(until.kind == Kind::Until);
  CHECK(until.children[0].kind == Kind::NegAtom);
  CHECK_EQ(until.children[0].atom, "p2");
  CHECK(until.children[1].kind == Kind::Atom);
  CHECK_EQ(until.children[1].atom, "p1");

  Formula g = parse_formula("G p3");
  CHECK(g.kind == Kind::Always);
  CHECK(g.children[0].kind == Kind::Atom);
  CHECK_EQ(g.children[0].atom, "p3");
}

TEST(ltl, parse_precedence_and_associativity) {
  // | binds loosest: a | b & c == a | (b & c)
  Formula f = parse_formula("a | b & c");
  CHECK(f.kind == Kind::Or);
  CHECK(f.children[1].kind == Kind::And);

  // & binds looser than U: a & b U c == a & (b U c)
  f = parse_formula("a & b U c");
  CHECK(f.kind == Kind::And);
  CHECK(f.children[1].kind == Kind::Until);

  // U is right-associative: a U b U c == a U (b U c)
  f = parse_formula("a U b U c");
  CHECK(f.kind == Kind::Until);
  CHECK(f.children[0].kind == Kind::Atom);
  CHECK(f.children[1].kind == Kind::Until);

  // unary operators chain and bind tightest
  f = parse_formula("X F p U q");
  CHECK(f.kind == Kind::Until);
  CHECK(f.children[0].kind == Kind::Next);
  CHECK(f.children[0].children[0].kind == Kind::Eventually);

  CHECK(parse_formula("true").is_true());
  CHECK(parse_formula("false").is_false());
  CHECK(parse_formula("!p").kind == Kind::NegAtom);
}

TEST(ltl, parse_errors) {
  CHECK_THROWS_EX(parse_formula(""), Error, e.code() == ErrorCode::InvalidInput);
  CHECK_THROWS_EX(parse_formula("p &"), Error, e.code() == ErrorCode::InvalidInput);
  CHECK_THROWS_EX(parse_formula("(p"), Error, e.code() == ErrorCode::InvalidInput);
  CHECK_THROWS_EX(parse_formula("p q"), Error, e.code() == ErrorCode::InvalidInput);
  CHECK_THROWS_EX(parse_formula("p U"), Error, e.code() == ErrorCode::InvalidInput);
  // negation is restricted to atoms, keeping the AST in negation normal form
  CHECK_THROWS(parse_formula("!(p & q)"), Error);
  CHECK_THROWS(parse_formula("!F p"), Error);
  CHECK_THROWS(parse_formula("!true"), Error);
}

TEST(ltl, render_parse_roundtrip) {
  // parse(to_string(f)) must reproduce every generated AST node for node.
  auto corpus = oracle::enumerate_formulas({"p", "q"}, 4);
  CHECK(corpus.size() > 1000);
  for (const auto& f : corpus) {
    Formula back = parse_formula(to_string(f));
    if (!(back == f)) {
      testfw::fail("roundtrip broke: " + to_string(f) + " reparsed as " + to_string(back));
    }
  }
}

TEST(ltl, atoms_sorted_unique) {
  auto a = atoms(parse_formula("q & p | F p"));
  CHECK_EQ(a.size(), size_t{2});
  CHECK_EQ(a[0], "p");
  CHECK_EQ(a[1], "q");
  CHECK(atoms(f_true()).empty());
}

TEST(ltl, fragment_classification) {
  CHECK(classify(parse_formula("F p")) == Fragment::CoSafe);
  CHECK(classify(parse_formula("p U q")) == Fragment::CoSafe);
  CHECK(classify(parse_formula("G p")) == Fragment::Safe);
  CHECK(classify(parse_formula("p & !q")) == Fragment::Both);
  CHECK(classify(parse_formula("X p")) == Fragment::Both);
  CHECK(classify(parse_formula("F p & G q")) == Fragment::Neither);
  CHECK(is_co_safe(parse_formula("F p2 & (!p2 U p1)")));
  CHECK(is_safe(parse_formula("G p3")));

  CHECK(parse_co_safe("F p2 & (!p2 U p1)").kind == Kind::And);
  CHECK(parse_safe("G p3").kind == Kind::Always);
  CHECK_THROWS_EX(parse_co_safe("G p"), Error, e.code() == ErrorCode::InvalidInput);
  CHECK_THROWS_EX(parse_safe("F p"), Error, e.code() == ErrorCode::InvalidInput);
  CHECK_THROWS_EX(parse_safe("p U q"), Error, e.code() == ErrorCode::InvalidInput);
}

TEST(ltl, simplify_folding) {
  auto S = [](const char* s) { return simplify(parse_formula(s)); };
  CHECK(S("p & true") == parse_formula("p"));
  CHECK(S("p | false") == parse_formula("p"));
  CHECK(S("p & false").is_false());
  CHECK(S("p | true").is_true());
  CHECK(S("p & p") == parse_formula("p"));
  CHECK(S("q & p") == S("p & q"));
  CHECK(S("(p & q) & r") == S("p & q & r"));
  CHECK(S("p U true").is_true());
  CHECK(S("p U false").is_false());
  CHECK(S("false U p") == parse_formula("p"));
  // "F true" asserts a nonempty remainder, which is not a tautology at the
  // end of a finite trace; simplify must leave it alone.
  CHECK(S("F true") == parse_formula("F true"));
}

TEST(ltl, simplify_idempotent) {
  for (const auto& f : oracle::enumerate_formulas({"p", "q"}, 4)) {
    Formula once = simplify(f);
    if (!(simplify(once) == once)) {
      testfw::fail("simplify not idempotent on " + to_string(f) + " -> " + to_string(once));
    }
  }
}

TEST(ltl, progress_examples) {
  Formula p = f_atom("p");
  CHECK(progress(p, {{"p", true}}).is_true());
  CHECK(progress(p, {{"p", false}}).is_false());

  Formula until = parse_formula("!p2 U p1");
  CHECK(progress(until, val2(false, false)) == simplify(until));
  CHECK(progress(until, val2(false, true)).is_false());
  CHECK(progress(until, val2(true, false)).is_true());
  CHECK(progress(until, val2(true, true)).is_true());

  Formula fp = parse_formula("F p1");
  CHECK(progress(fp, {{"p1", false}}) == simplify(fp));
  CHECK(progress(fp, {{"p1", true}}).is_true());

  Formula gp = parse_formula("G p3");
  CHECK(progress(gp, {{"p3", true}}) == simplify(gp));
  CHECK(progress(gp, {{"p3", false}}).is_false());

  // Strong next: the residual keeps the nonempty-remainder obligation.
  Formula xp = parse_formula("X p");
  CHECK(progress(xp, {{"p", false}}) == simplify(parse_formula("F true & p")));

  CHECK_THROWS_EX(progress(p, Valuation{}), Error, e.code() == ErrorCode::InvalidInput);
}

TEST(ltl, satisfies_examples) {
  Formula fp = parse_formula("F p1");
  CHECK(satisfies_strong(trace_of({val2(false, false), val2(true, false)}), fp));
  CHECK(!satisfies_strong(trace_of({val2(false, false)}), fp));

  Formula gp = parse_formula("G p1");
  CHECK(satisfies_weak(trace_of({val2(true, false), val2(true, true)}), gp));
  CHECK(!satisfies_weak(trace_of({val2(true, false), val2(false, false)}), gp));

  Formula xp = parse_formula("X p1");
  CHECK(satisfies_strong(trace_of({val2(false, false), val2(true, false)}), xp));
  CHECK(!satisfies_strong(trace_of({val2(true, false)}), xp));
  CHECK(satisfies_weak(trace_of({val2(true, false)}), xp));

  Formula until = parse_formula("!p2 U p1");
  CHECK(satisfies_strong(trace_of({val2(false, false), val2(true, false)}), until));
  CHECK(!satisfies_strong(trace_of({val2(false, true), val2(true, false)}), until));

  // dispatch by fragment
  CHECK(satisfies(trace_of({val2(false, false), val2(true, false)}), fp));
  CHECK(satisfies(trace_of({val2(true, false)}), gp));
  CHECK_THROWS_EX(satisfies(trace_of({val2(true, true)}), parse_formula("F p1 & G p2")), Error,
                  e.code() == ErrorCode::InvalidInput);
}

TEST(ltl, empty_trace_conventions) {
  CHECK(satisfies_strong({}, f_true()));
  CHECK(!satisfies_strong({}, f_atom("p")));
  // an exhausted trace cannot discharge an eventuality, even a trivial one
  CHECK(!satisfies_strong({}, parse_formula("F true")));
  CHECK(satisfies_weak({}, parse_formula("G p")));
  CHECK(!satisfies_weak({}, f_false()));
}

TEST(ltl, semantics_agree_with_recursive_oracle) {
  auto corpus = oracle::enumerate_formulas({"p", "q"}, 4);
  auto traces = oracle::enumerate_traces({"p", "q"}, 1, 3);
  long checked = 0;
  for (const auto& f : corpus) {
    for (const auto& tr : traces) {
      bool lib_s = satisfies_strong(tr, f);
      bool ora_s = oracle::ltl_strong(f, tr);
      if (lib_s != ora_s)
        testfw::fail("strong semantics disagree on " + to_string(f) + " len " +
                     std::to_string(tr.size()));
      bool lib_w = satisfies_weak(tr, f);
      bool ora_w = oracle::ltl_weak(f, tr);
      if (lib_w != ora_w)
        testfw::fail("weak semantics disagree on " + to_string(f) + " len " +
                     std::to_string(tr.size()));
      ++checked;
    }
  }
  CHECK(checked > 50000);
}

TEST(ltl, progression_soundness) {
  // One progression step against the observed head must preserve strong
  // satisfaction of the remainder, for every formula and trace in the corpus.
  auto corpus = oracle::enumerate_formulas({"p", "q"}, 4);
  auto traces = oracle::enumerate_traces({"p", "q"}, 2, 3);
  for (const auto& f : corpus) {
    for (const auto& tr : traces) {
      Trace tail(tr.begin() + 1, tr.end());
      Formula residual = progress(f, tr[0].v);
      bool whole = oracle::ltl_strong(f, tr);
      bool stepped = satisfies_strong(tail, residual);
      if (whole != stepped)
        testfw::fail("progression broke strong semantics on " + to_string(f) + " residual " +
                     to_string(residual));
    }
  }
  // Safe formulas are replayed with weak semantics; progression must respect
  // that reading as well.
  for (const auto& f : corpus) {
    if (!is_safe(f)) continue;
    for (const auto& tr : traces) {
      Trace tail(tr.begin() + 1, tr.end());
      bool whole = oracle::ltl_weak(f, tr);
      bool stepped = satisfies_weak(tail, progress(f, tr[0].v));
      if (whole != stepped)
        testfw::fail("progression broke weak semantics on " + to_string(f));
    }
  }
}

TEST(ltl, eval_predicate_track_ball) {
  TrajectoryTable refs;
  refs["circ"] = [](double t) {
    Vec z(2);
    z << 0.5 * std::sin(0.5 * t), 0.5 * std::cos(0.5 * t);
    return z;
  };
  Predicate near = TrackBall{"circ", 0.6};
  double t = 1.0;
  Vec z = refs["circ"](t);
  Vec on_sphere = z;
  on_sphere[0] += 0.6;  // distance exactly eps: the ball is closed
  CHECK(eval_predicate(near, on_sphere, t, refs));
  Vec outside = z;
  outside[0] += 0.6 + 1e-9;
  CHECK(!eval_predicate(near, outside, t, refs));
  CHECK(eval_predicate(near, z, t, refs));

  Predicate dangling = TrackBall{"nope", 0.6};
  CHECK_THROWS_EX(eval_predicate(dangling, z, t, refs), Error,
                  e.code() == ErrorCode::InvalidInput);
  Vec wrong_dim(3);
  wrong_dim << 0, 0, 0;
  CHECK_THROWS_EX(eval_predicate(near, wrong_dim, t, refs), Error,
                  e.code() == ErrorCode::InvalidInput);
}

TEST(ltl, eval_predicate_box) {
  Box box;
  box.A = Mat::Identity(2, 2);
  box.r = Vec::Zero(2);
  box.c = Vec::Constant(2, -30.0);
  box.C = Vec::Constant(2, 30.0);
  Predicate inside = BoxMembership{box};
  TrajectoryTable no_refs;

  Vec x(2);
  x << 29.9, 0.0;
  CHECK(eval_predicate(inside, x, 0.0, no_refs));
  x << 31.0, 0.0;
  CHECK(!eval_predicate(inside, x, 0.0, no_refs));
  x << 30.0, 0.0;  // the polytope is closed
  CHECK(eval_predicate(inside, x, 0.0, no_refs));
  x << 0.0, -30.000001;
  CHECK(!eval_predicate(inside, x, 0.0, no_refs));
}
