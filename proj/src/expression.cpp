#include "nsstab/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nsstab {

struct Expression::Node {
  enum Kind { constant, variable, unary_minus, add, sub, mul, div, pow, call } kind = constant;
  double value = 0.0;
  int var = 0;
  std::string name;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

struct FunctionInfo {
  const char* name;
  int arity;
};

constexpr FunctionInfo kFunctions[] = {{"sin", 1},  {"cos", 1},  {"tan", 1},  {"exp", 1},  {"log", 1},
                                       {"sqrt", 1}, {"abs", 1},  {"sinh", 1}, {"cosh", 1}, {"tanh", 1},
                                       {"pow", 2},  {"min", 2},  {"max", 2}};

double call_function(const std::string& f, const double* a) {
  if (f == "sin") return std::sin(a[0]);
  if (f == "cos") return std::cos(a[0]);
  if (f == "tan") return std::tan(a[0]);
  if (f == "exp") return std::exp(a[0]);
  if (f == "log") return std::log(a[0]);
  if (f == "sqrt") return std::sqrt(a[0]);
  if (f == "abs") return std::abs(a[0]);
  if (f == "sinh") return std::sinh(a[0]);
  if (f == "cosh") return std::cosh(a[0]);
  if (f == "tanh") return std::tanh(a[0]);
  if (f == "pow") return std::pow(a[0], a[1]);
  if (f == "min") return std::min(a[0], a[1]);
  return std::max(a[0], a[1]);
}

double eval(const Node& n, const double* vars) {
  switch (n.kind) {
    case Node::constant:
      return n.value;
    case Node::variable:
      return vars[n.var];
    case Node::unary_minus:
      return -eval(*n.args[0], vars);
    case Node::add:
      return eval(*n.args[0], vars) + eval(*n.args[1], vars);
    case Node::sub:
      return eval(*n.args[0], vars) - eval(*n.args[1], vars);
    case Node::mul:
      return eval(*n.args[0], vars) * eval(*n.args[1], vars);
    case Node::div:
      return eval(*n.args[0], vars) / eval(*n.args[1], vars);
    case Node::pow:
      return std::pow(eval(*n.args[0], vars), eval(*n.args[1], vars));
    case Node::call: {
      double a[2] = {0.0, 0.0};
      for (std::size_t i = 0; i < n.args.size(); ++i) a[i] = eval(*n.args[i], vars);
      return call_function(n.name, a);
    }
  }
  return 0.0;
}

bool uses(const Node& n, int var) {
  if (n.kind == Node::variable) return n.var == var;
  return std::any_of(n.args.begin(), n.args.end(), [var](const NodePtr& a) { return uses(*a, var); });
}

bool is_constant(const Node& n) { return n.kind == Node::constant; }

// Folds operations on constant operands into a single constant node.
NodePtr make(Node::Kind kind, std::vector<NodePtr> args, std::string name = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->name = std::move(name);
  n->args = std::move(args);
  if (std::all_of(n->args.begin(), n->args.end(), [](const NodePtr& a) { return is_constant(*a); })) {
    const double v = eval(*n, nullptr);
    auto c = std::make_shared<Node>();
    c->value = v;
    return c;
  }
  return n;
}

class Parser {
 public:
  Parser(const std::string& text, const std::map<std::string, double>& constants)
      : s_(text), constants_(constants) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression '" + s_ + "': " + what + " at column " + std::to_string(pos_ + 1));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Node::add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Node::sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Node::mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Node::div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::unary_minus, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += std::size_t(end - begin);
    auto n = std::make_shared<Node>();
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    static const char* vars[] = {"x1", "x2", "x3", "t"};
    for (int i = 0; i < 4; ++i) {
      if (id == vars[i]) {
        auto n = std::make_shared<Node>();
        n->kind = Node::variable;
        n->var = i;
        return n;
      }
    }
    for (const auto& f : kFunctions) {
      if (id != f.name) continue;
      if (!accept('(')) fail("expected '(' after " + id);
      std::vector<NodePtr> args{expr()};
      while (accept(',')) args.push_back(expr());
      if (!accept(')')) fail("expected ')'");
      if (int(args.size()) != f.arity) fail(id + " takes " + std::to_string(f.arity) + " argument(s)");
      return make(Node::call, std::move(args), id);
    }
    auto n = std::make_shared<Node>();
    if (id == "pi") {
      n->value = std::numbers::pi;
    } else if (id == "e") {
      n->value = std::numbers::e;
    } else if (auto it = constants_.find(id); it != constants_.end()) {
      n->value = it->second;
    } else {
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    return n;
  }

  const std::string& s_;
  const std::map<std::string, double>& constants_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : text_("0"), root_(std::make_shared<Node>()) {}

Expression Expression::parse(const std::string& text, const std::map<std::string, double>& constants) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text, constants).parse();
  return e;
}

double Expression::operator()(double x1, double x2, double x3, double t) const {
  const double vars[4] = {x1, x2, x3, t};
  return eval(*root_, vars);
}

bool Expression::depends_on(const std::string& variable) const {
  static const char* vars[] = {"x1", "x2", "x3", "t"};
  for (int i = 0; i < 4; ++i)
    if (variable == vars[i]) return uses(*root_, i);
  throw std::invalid_argument("expression: unknown variable " + variable);
}

bool Expression::is_zero() const { return root_->kind == Node::constant && root_->value == 0.0; }

}  // namespace nsstab
