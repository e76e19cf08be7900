#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace delaykit {

/// Compiled closed-form expression over a fixed variable set.
///
/// Grammar (EBNF):
///   expr    := term (('+' | '-') term)*
///   term    := factor (('*' | '/') factor)*
///   factor  := unary ('^' factor)?            -- right associative
///   unary   := ('+' | '-') unary | primary
///   primary := number | ident | ident '(' expr ')' | '(' expr ')'
///
/// Identifiers: the declared variables (e.g. "t", "x"), constants "pi" and
/// "e", and the functions sin, cos, exp. Anything else is rejected at parse
/// time with the offending name and position.
class Expression {
 public:
  static Expression parse(std::string_view text, std::span<const std::string> variables);

  /// Evaluates with values aligned to the declared variable order.
  double operator()(std::span<const double> values) const;

  double eval1(double v0) const { return (*this)(std::span<const double>(&v0, 1)); }
  double eval2(double v0, double v1) const {
    const double vals[2] = {v0, v1};
    return (*this)(std::span<const double>(vals, 2));
  }

  const std::string& text() const { return text_; }

  struct Node;  // opaque AST node

 private:
  Expression() = default;

  std::shared_ptr<const Node> root_;
  std::string text_;
  std::size_t n_vars_ = 0;
};

}  // namespace delaykit
