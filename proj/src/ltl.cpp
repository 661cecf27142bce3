#include "tltrack/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

#include "tltrack/errors.hpp"

namespace tlt::ltl {

bool Formula::operator==(const Formula& o) const {
  return kind == o.kind && atom == o.atom && children == o.children;
}

Formula f_true() { return Formula{Kind::True, {}, {}}; }
Formula f_false() { return Formula{Kind::False, {}, {}}; }
Formula f_atom(std::string name) { return Formula{Kind::Atom, std::move(name), {}}; }
Formula f_neg_atom(std::string name) { return Formula{Kind::NegAtom, std::move(name), {}}; }

Formula f_and(std::vector<Formula> cs) {
  if (cs.size() == 1) return cs.front();
  return Formula{Kind::And, {}, std::move(cs)};
}

Formula f_or(std::vector<Formula> cs) {
  if (cs.size() == 1) return cs.front();
  return Formula{Kind::Or, {}, std::move(cs)};
}

Formula f_next(Formula f) { return Formula{Kind::Next, {}, {std::move(f)}}; }
Formula f_eventually(Formula f) { return Formula{Kind::Eventually, {}, {std::move(f)}}; }
Formula f_until(Formula a, Formula b) { return Formula{Kind::Until, {}, {std::move(a), std::move(b)}}; }
Formula f_always(Formula f) { return Formula{Kind::Always, {}, {std::move(f)}}; }

namespace {

// Precedence levels for rendering: Or lowest, then And, then Until, unary/leaf highest.
int prec(Kind k) {
  switch (k) {
    case Kind::Or: return 1;
    case Kind::And: return 2;
    case Kind::Until: return 3;
    default: return 4;
  }
}

bool is_binary(Kind k) { return k == Kind::And || k == Kind::Or || k == Kind::Until; }

void render(const Formula& f, std::string& out) {
  auto child = [&out](const Formula& c) {
    if (is_binary(c.kind)) {
      out += '(';
      render(c, out);
      out += ')';
    } else {
      render(c, out);
    }
  };
  switch (f.kind) {
    case Kind::True: out += "true"; break;
    case Kind::False: out += "false"; break;
    case Kind::Atom: out += f.atom; break;
    case Kind::NegAtom:
      out += '!';
      out += f.atom;
      break;
    case Kind::And:
    case Kind::Or: {
      const char* sep = f.kind == Kind::And ? " & " : " | ";
      for (size_t i = 0; i < f.children.size(); ++i) {
        if (i) out += sep;
        child(f.children[i]);
      }
      break;
    }
    case Kind::Until:
      child(f.children[0]);
      out += " U ";
      child(f.children[1]);
      break;
    case Kind::Next:
      out += "X ";
      child(f.children[0]);
      break;
    case Kind::Eventually:
      out += "F ";
      child(f.children[0]);
      break;
    case Kind::Always:
      out += "G ";
      child(f.children[0]);
      break;
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  render(f, out);
  return out;
}

namespace {

struct Token {
  enum Type { Atom, True, False, Not, And, Or, Next, Eventually, Always, Until, LParen, RParen, End } type;
  std::string text;
  size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    size_t start = i;
    if (ch == '!') {
      out.push_back({Token::Not, "!", start});
      ++i;
    } else if (ch == '&') {
      out.push_back({Token::And, "&", start});
      ++i;
    } else if (ch == '|') {
      out.push_back({Token::Or, "|", start});
      ++i;
    } else if (ch == '(') {
      out.push_back({Token::LParen, "(", start});
      ++i;
    } else if (ch == ')') {
      out.push_back({Token::RParen, ")", start});
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string word = s.substr(i, j - i);
      Token::Type t;
      if (word == "true") t = Token::True;
      else if (word == "false") t = Token::False;
      else if (word == "X") t = Token::Next;
      else if (word == "F") t = Token::Eventually;
      else if (word == "G") t = Token::Always;
      else if (word == "U") t = Token::Until;
      else t = Token::Atom;
      out.push_back({t, word, start});
      i = j;
    } else {
      throw input_error("formula syntax error: unexpected character '" + std::string(1, ch) +
                        "' at position " + std::to_string(start));
    }
  }
  out.push_back({Token::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  Formula parse() {
    Formula f = parse_or();
    expect(Token::End, "end of input");
    return f;
  }

 private:
  const Token& peek() const { return toks_[idx_]; }
  Token take() { return toks_[idx_++]; }

  [[noreturn]] void fail(const std::string& expected) {
    const Token& t = peek();
    std::string got = t.type == Token::End ? "end of input" : "'" + t.text + "'";
    throw input_error("formula syntax error: expected " + expected + ", got " + got +
                      " at position " + std::to_string(t.pos));
  }

  void expect(Token::Type ty, const std::string& what) {
    if (peek().type != ty) fail(what);
    take();
  }

  Formula parse_or() {
    std::vector<Formula> cs{parse_and()};
    while (peek().type == Token::Or) {
      take();
      cs.push_back(parse_and());
    }
    return f_or(std::move(cs));
  }

  Formula parse_and() {
    std::vector<Formula> cs{parse_until()};
    while (peek().type == Token::And) {
      take();
      cs.push_back(parse_until());
    }
    return f_and(std::move(cs));
  }

  Formula parse_until() {
    Formula left = parse_unary();
    if (peek().type == Token::Until) {
      take();
      return f_until(std::move(left), parse_until());
    }
    return left;
  }

  Formula parse_unary() {
    const Token& t = peek();
    switch (t.type) {
      case Token::Not: {
        take();
        if (peek().type != Token::Atom) {
          throw input_error("negation is restricted to atoms (negation normal form) at position " +
                            std::to_string(peek().pos));
        }
        return f_neg_atom(take().text);
      }
      case Token::Next: take(); return f_next(parse_unary());
      case Token::Eventually: take(); return f_eventually(parse_unary());
      case Token::Always: take(); return f_always(parse_unary());
      case Token::LParen: {
        take();
        Formula f = parse_or();
        expect(Token::RParen, "')'");
        return f;
      }
      case Token::True: take(); return f_true();
      case Token::False: take(); return f_false();
      case Token::Atom: return f_atom(take().text);
      default: fail("a formula");
    }
  }

  std::vector<Token> toks_;
  size_t idx_ = 0;
};

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(text).parse(); }

Fragment classify(const Formula& f) {
  bool has_cosafe_only = false;  // Eventually or Until
  bool has_safe_only = false;    // Always
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.kind == Kind::Eventually || g.kind == Kind::Until) has_cosafe_only = true;
    if (g.kind == Kind::Always) has_safe_only = true;
    for (const Formula& c : g.children) walk(c);
  };
  walk(f);
  if (has_cosafe_only && has_safe_only) return Fragment::Neither;
  if (has_cosafe_only) return Fragment::CoSafe;
  if (has_safe_only) return Fragment::Safe;
  return Fragment::Both;
}

bool is_co_safe(const Formula& f) {
  Fragment fr = classify(f);
  return fr == Fragment::CoSafe || fr == Fragment::Both;
}

bool is_safe(const Formula& f) {
  Fragment fr = classify(f);
  return fr == Fragment::Safe || fr == Fragment::Both;
}

Formula parse_co_safe(const std::string& text) {
  Formula f = parse_formula(text);
  if (!is_co_safe(f)) {
    throw input_error("fragment violation: '" + text + "' is not co-safe (contains G)");
  }
  return f;
}

Formula parse_safe(const std::string& text) {
  Formula f = parse_formula(text);
  if (!is_safe(f)) {
    throw input_error("fragment violation: '" + text + "' is not safe (contains F or U)");
  }
  return f;
}

std::vector<std::string> atoms(const Formula& f) {
  std::vector<std::string> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.kind == Kind::Atom || g.kind == Kind::NegAtom) out.push_back(g.atom);
    for (const Formula& c : g.children) walk(c);
  };
  walk(f);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Formula simplify(const Formula& f) {
  switch (f.kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Atom:
    case Kind::NegAtom:
      return f;
    case Kind::And:
    case Kind::Or: {
      bool conj = f.kind == Kind::And;
      std::vector<Formula> cs;
      for (const Formula& c : f.children) {
        Formula sc = simplify(c);
        if (sc.kind == (conj ? Kind::True : Kind::False)) continue;       // identity element
        if (sc.kind == (conj ? Kind::False : Kind::True)) return conj ? f_false() : f_true();
        if (sc.kind == f.kind) {
          for (Formula& gc : sc.children) cs.push_back(std::move(gc));    // flatten same kind
        } else {
          cs.push_back(std::move(sc));
        }
      }
      std::sort(cs.begin(), cs.end(),
                [](const Formula& a, const Formula& b) { return to_string(a) < to_string(b); });
      cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
      if (cs.empty()) return conj ? f_true() : f_false();
      if (cs.size() == 1) return cs.front();
      return Formula{f.kind, {}, std::move(cs)};
    }
    case Kind::Next: {
      Formula c = simplify(f.children[0]);
      return f_next(std::move(c));
    }
    case Kind::Eventually: {
      Formula c = simplify(f.children[0]);
      // "F true" is NOT collapsed: on finite traces it asserts that at least
      // one position remains, which differs from plain "true" exactly at the
      // end of a trace (progression relies on that distinction for X).
      if (c.is_false()) return c;
      return f_eventually(std::move(c));
    }
    case Kind::Always: {
      Formula c = simplify(f.children[0]);
      if (c.is_true() || c.is_false()) return c;
      return f_always(std::move(c));
    }
    case Kind::Until: {
      Formula a = simplify(f.children[0]);
      Formula b = simplify(f.children[1]);
      if (b.is_true()) return f_true();
      if (b.is_false()) return f_false();
      if (a.is_false()) return b;
      return f_until(std::move(a), std::move(b));
    }
  }
  return f;
}

namespace {

bool lookup(const Valuation& v, const std::string& atom) {
  auto it = v.find(atom);
  if (it == v.end()) throw input_error("progress: atom '" + atom + "' is unassigned in the valuation");
  return it->second;
}

Formula progress_raw(const Formula& f, const Valuation& v) {
  switch (f.kind) {
    case Kind::True: return f_true();
    case Kind::False: return f_false();
    case Kind::Atom: return lookup(v, f.atom) ? f_true() : f_false();
    case Kind::NegAtom: return lookup(v, f.atom) ? f_false() : f_true();
    case Kind::And: {
      std::vector<Formula> cs;
      cs.reserve(f.children.size());
      for (const Formula& c : f.children) cs.push_back(progress_raw(c, v));
      return f_and(std::move(cs));
    }
    case Kind::Or: {
      std::vector<Formula> cs;
      cs.reserve(f.children.size());
      for (const Formula& c : f.children) cs.push_back(progress_raw(c, v));
      return f_or(std::move(cs));
    }
    case Kind::Next:
      // Strong next on finite traces: the remaining trace must be nonempty
      // AND satisfy the operand. "F true" is exactly the nonemptiness
      // obligation (it progresses to true once any step is consumed, and an
      // exhausted trace leaves it unsatisfied), so carrying it keeps the
      // automaton's acceptance aligned with satisfies_strong at trace end.
      return f_and({f_eventually(f_true()), f.children[0]});
    case Kind::Eventually:
      return f_or({progress_raw(f.children[0], v), f});
    case Kind::Always:
      return f_and({progress_raw(f.children[0], v), f});
    case Kind::Until:
      return f_or({progress_raw(f.children[1], v),
                   f_and({progress_raw(f.children[0], v), f})});
  }
  return f;
}

}  // namespace

Formula progress(const Formula& f, const Valuation& v) { return simplify(progress_raw(f, v)); }

namespace {

// Backward dynamic program over positions; linear in trace length times
// formula size, so million-step traces replay cheaply.
bool evaluate(const Trace& trace, const Formula& f, bool weak) {
  if (trace.empty()) {
    Formula s = simplify(f);
    return weak ? !s.is_false() : s.is_true();
  }
  std::vector<const Formula*> nodes;
  std::function<void(const Formula&)> collect = [&](const Formula& g) {
    for (const Formula& c : g.children) collect(c);
    nodes.push_back(&g);
  };
  collect(f);
  std::unordered_map<const Formula*, size_t> id;
  for (size_t i = 0; i < nodes.size(); ++i) id[nodes[i]] = i;

  const size_t n = trace.size();
  std::vector<char> cur(nodes.size()), next(nodes.size());
  for (size_t pos = n; pos-- > 0;) {
    const Valuation& v = trace[pos].v;
    bool last = pos + 1 == n;
    for (size_t i = 0; i < nodes.size(); ++i) {
      const Formula& g = *nodes[i];
      bool val = false;
      switch (g.kind) {
        case Kind::True: val = true; break;
        case Kind::False: val = false; break;
        case Kind::Atom: val = lookup(v, g.atom); break;
        case Kind::NegAtom: val = !lookup(v, g.atom); break;
        case Kind::And:
          val = true;
          for (const Formula& c : g.children) val = val && cur[id[&c]];
          break;
        case Kind::Or:
          val = false;
          for (const Formula& c : g.children) val = val || cur[id[&c]];
          break;
        case Kind::Next:
          val = last ? weak : next[id[&g.children[0]]];
          break;
        case Kind::Eventually:
          val = cur[id[&g.children[0]]] || (!last && next[i]);
          break;
        case Kind::Always:
          val = cur[id[&g.children[0]]] && (last || next[i]);
          break;
        case Kind::Until:
          val = cur[id[&g.children[1]]] ||
                (cur[id[&g.children[0]]] && !last && next[i]);
          break;
      }
      cur[i] = val;
    }
    next = cur;
  }
  return cur[id[&f]] != 0;
}

}  // namespace

bool satisfies_strong(const Trace& trace, const Formula& f) { return evaluate(trace, f, false); }
bool satisfies_weak(const Trace& trace, const Formula& f) { return evaluate(trace, f, true); }

bool satisfies(const Trace& trace, const Formula& f) {
  switch (classify(f)) {
    case Fragment::CoSafe:
    case Fragment::Both:
      return satisfies_strong(trace, f);
    case Fragment::Safe:
      return satisfies_weak(trace, f);
    case Fragment::Neither:
      throw input_error("satisfies: formula '" + to_string(f) +
                        "' mixes co-safe and safe operators; finite-trace semantics undefined");
  }
  return false;
}

bool eval_predicate(const Predicate& p, const Vec& x, double t, const TrajectoryTable& refs) {
  if (std::holds_alternative<TrackBall>(p)) {
    const TrackBall& tb = std::get<TrackBall>(p);
    auto it = refs.find(tb.trajectory);
    if (it == refs.end()) throw input_error("unknown trajectory id '" + tb.trajectory + "'");
    Vec z = it->second(t);
    if (z.size() != x.size()) {
      throw input_error("trajectory '" + tb.trajectory + "' has dimension " +
                        std::to_string(z.size()) + ", state has " + std::to_string(x.size()));
    }
    return (x - z).norm() <= tb.eps;
  }
  const BoxMembership& bm = std::get<BoxMembership>(p);
  if (bm.box.dim() != x.size()) {
    throw input_error("box predicate has dimension " + std::to_string(bm.box.dim()) +
                      ", state has " + std::to_string(x.size()));
  }
  return bm.box.contains(x, false);
}

}  // namespace tlt::ltl
