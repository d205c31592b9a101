#pragma once

#include <map>
#include <memory>
#include <string>

namespace nsstab {

/// A scalar arithmetic expression in x1, x2, x3 and t.
///
/// Grammar: numbers, + - * / ^ (right associative), parentheses, the
/// constants pi and e, named constants supplied at parse time, and the
/// functions sin cos tan exp log sqrt abs sinh cosh tanh pow min max.
class Expression {
 public:
  Expression();
  static Expression parse(const std::string& text, const std::map<std::string, double>& constants = {});

  double operator()(double x1, double x2, double x3, double t) const;

  const std::string& text() const { return text_; }
  /// Syntactic dependence; variable is one of "x1", "x2", "x3", "t".
  bool depends_on(const std::string& variable) const;
  /// True for an expression that is the literal constant 0 after folding.
  bool is_zero() const;

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace nsstab
