#include "tltrack/expr.hpp"

#include <cctype>
#include <cmath>
#include <map>

#include "tltrack/errors.hpp"

namespace tlt::expr {

struct Compiled::Node {
  enum Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Tanh, Log, Exp } op;
  double value = 0.0;
  int slot = -1;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Compiled::Node>;
using Node = Compiled::Node;

NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

double eval_node(const Node& n, const double* vars) {
  switch (n.op) {
    case Node::Const: return n.value;
    case Node::Var: return vars[n.slot];
    case Node::Add: return eval_node(*n.a, vars) + eval_node(*n.b, vars);
    case Node::Sub: return eval_node(*n.a, vars) - eval_node(*n.b, vars);
    case Node::Mul: return eval_node(*n.a, vars) * eval_node(*n.b, vars);
    case Node::Div: return eval_node(*n.a, vars) / eval_node(*n.b, vars);
    case Node::Pow: return std::pow(eval_node(*n.a, vars), eval_node(*n.b, vars));
    case Node::Neg: return -eval_node(*n.a, vars);
    case Node::Sin: return std::sin(eval_node(*n.a, vars));
    case Node::Cos: return std::cos(eval_node(*n.a, vars));
    case Node::Tanh: return std::tanh(eval_node(*n.a, vars));
    case Node::Log: return std::log(eval_node(*n.a, vars));
    case Node::Exp: return std::exp(eval_node(*n.a, vars));
  }
  return 0.0;
}

class ExprParser {
 public:
  ExprParser(const std::string& text, const std::vector<std::string>& vars) : s_(text) {
    for (size_t i = 0; i < vars.size(); ++i) slots_[vars[i]] = static_cast<int>(i);
  }

  NodePtr parse() {
    NodePtr e = sum();
    skip_ws();
    if (i_ < s_.size()) fail("end of expression");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) {
    throw input_error("expression syntax error in '" + s_ + "': expected " + expected +
                      " at position " + std::to_string(i_));
  }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool eat(char ch) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == ch) {
      ++i_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr e = term();
    for (;;) {
      if (eat('+')) e = make(Node::Add, e, term());
      else if (eat('-')) e = make(Node::Sub, e, term());
      else return e;
    }
  }

  NodePtr term() {
    NodePtr e = unary();
    for (;;) {
      if (eat('*')) e = make(Node::Mul, e, unary());
      else if (eat('/')) e = make(Node::Div, e, unary());
      else return e;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Node::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make(Node::Pow, base, unary());  // right-associative
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (i_ >= s_.size()) fail("an operand");
    char ch = s_[i_];
    if (ch == '(') {
      ++i_;
      NodePtr e = sum();
      if (!eat(')')) fail("')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      size_t end = 0;
      double v = std::stod(s_.substr(i_), &end);
      i_ += end;
      auto n = std::make_shared<Node>();
      n->op = Node::Const;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      size_t j = i_;
      while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
      std::string word = s_.substr(i_, j - i_);
      i_ = j;
      static const std::map<std::string, Node::Op> funcs = {
          {"sin", Node::Sin}, {"cos", Node::Cos}, {"tanh", Node::Tanh},
          {"log", Node::Log}, {"exp", Node::Exp}};
      auto fit = funcs.find(word);
      if (fit != funcs.end()) {
        if (!eat('(')) fail("'(' after function name");
        NodePtr arg = sum();
        if (!eat(')')) fail("')'");
        return make(fit->second, arg);
      }
      auto vit = slots_.find(word);
      if (vit == slots_.end()) {
        throw input_error("expression '" + s_ + "' uses unknown variable '" + word + "'");
      }
      auto n = std::make_shared<Node>();
      n->op = Node::Var;
      n->slot = vit->second;
      return n;
    }
    fail("an operand");
  }

  const std::string& s_;
  size_t i_ = 0;
  std::map<std::string, int> slots_;
};

}  // namespace

double Compiled::eval(const double* vars) const { return eval_node(*root_, vars); }

double Compiled::eval(const std::vector<double>& vars) const { return eval_node(*root_, vars.data()); }

Compiled compile(const std::string& text, const std::vector<std::string>& vars) {
  Compiled c;
  c.root_ = ExprParser(text, vars).parse();
  return c;
}

VectorField::VectorField(const std::vector<std::string>& exprs,
                         const std::vector<std::string>& vars) {
  nvars_ = vars.size();
  with_time_ = !vars.empty() && vars.back() == "t";
  for (const std::string& e : exprs) rows_.push_back(compile(e, vars));
}

Vec VectorField::operator()(const Vec& v) const {
  if (static_cast<size_t>(v.size()) != nvars_) {
    throw input_error("vector field: expected " + std::to_string(nvars_) + " variables, got " +
                      std::to_string(v.size()));
  }
  Vec out(size());
  for (int i = 0; i < size(); ++i) out[i] = rows_[i].eval(v.data());
  return out;
}

Vec VectorField::eval_with_time(const Vec& v, double t) const {
  std::vector<double> vars(nvars_);
  if (static_cast<size_t>(v.size()) + 1 != nvars_ || !with_time_) {
    throw input_error("vector field: time slot mismatch");
  }
  for (int i = 0; i < v.size(); ++i) vars[static_cast<size_t>(i)] = v[i];
  vars[nvars_ - 1] = t;
  Vec out(size());
  for (int i = 0; i < size(); ++i) out[i] = rows_[i].eval(vars.data());
  return out;
}

}  // namespace tlt::expr
