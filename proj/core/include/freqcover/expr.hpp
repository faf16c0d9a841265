// SPDX-License-Identifier: Apache-2.0
//
// Tiny arithmetic-expression language for spatially varying coefficients and
// boundary data.  Grammar:
//
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := atom ('^' atom)*          (left associative; exponent must
//                                         fold to an integer constant)
//   atom    := number | 'x' | 'y' | 'pi' | 'sin'|'cos'|'exp' '(' expr ')'
//            | '(' expr ')'
//
// Evaluation is pure and reentrant; the AST is immutable after parse.

#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace freqcover {

// Thrown by Expr::parse.  `offset` is the byte offset of the first offending
// character in the source string.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t offset, const std::string& what)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

// Thrown by Expr::eval (division by zero, dimension mismatch, ...).
class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class ExprKind {
  Constant,   // literal number
  Pi,         // named constant, prints as "pi"
  Variable,   // coordinate x (axis 0) or y (axis 1)
  Sum,
  Difference,
  Product,
  Quotient,
  Power,      // integer exponent, stored in `exponent`
  Sin,
  Cos,
  Exp,
};

struct ExprNode {
  ExprKind kind{ExprKind::Constant};
  double value = 0.0;   // Constant
  int axis = 0;         // Variable
  int exponent = 0;     // Power
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

class Expr {
public:
  Expr() = default;

  // Parses `src`; throws ParseError with a byte offset on malformed input,
  // unknown identifiers, and non-integer exponents.
  static Expr parse(std::string_view src);

  bool valid() const noexcept { return root_ != nullptr; }

  // Evaluates at a point with point.size() coordinates.  Throws EvalError if
  // the expression references an axis >= point.size() or on division by zero
  // / non-finite intermediate results.
  double eval(std::span<const double> point) const;
  double operator()(double x) const;
  double operator()(double x, double y) const;

  // Highest coordinate axis referenced, or -1 for constant expressions.
  int max_axis() const noexcept;

  // Unparses the AST (canonical spacing, minimal parentheses).  The result
  // re-parses to an AST with identical evaluation.
  std::string to_string() const;

  const ExprNode* root() const noexcept { return root_.get(); }

private:
  explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}
  std::shared_ptr<const ExprNode> root_;
};

}  // namespace freqcover
