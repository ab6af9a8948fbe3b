#pragma once

// Closed-form data such as "0.3*sin(2*pi*x)*sin(2*pi*y)*sin(2*pi*t)".
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | '+' unary | primary
//   primary := number | 'pi' | 'x' | 'y' | 't' | '(' expr ')' | func '(' expr ')'
//   func    := sin | cos | exp | log
//
// x, y and t may only appear inside sin or cos, and each such argument must be
// 2π·(integer combination of x/Lx, y/Ly, t/Lt) plus a constant, which keeps
// every datum exactly periodic on the grid it is sampled on.

#include <memory>
#include <string>

#include "ktcy/field.hpp"

namespace ktcy::expression {

struct Node;

class Expression {
 public:
  /// Throws ParseError with the offending position.
  static Expression parse(const std::string& text);

  const std::string& text() const { return text_; }
  /// Throws ParseError if some sin/cos argument is not periodic on the grid's box,
  /// NonFiniteValue if the value is not finite at some grid point.
  ScalarField sample(const GridSpec& grid) const;
  /// Value at one point, without periodicity checks.
  double evaluate(double x, double y, double t) const;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace ktcy::expression
