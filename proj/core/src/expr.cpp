// SPDX-License-Identifier: Apache-2.0

#include "freqcover/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace freqcover {
namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

NodePtr make_binary(ExprKind kind, NodePtr lhs, NodePtr rhs) {
  ExprNode n;
  n.kind = kind;
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return make_node(std::move(n));
}

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr run() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail(pos_, "unexpected trailing input");
    return e;
  }

private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(std::size_t at, const std::string& msg) const {
    std::ostringstream os;
    os << "parse error at byte " << at << ": " << msg;
    throw ParseError(at, os.str());
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (consume('+')) {
        lhs = make_binary(ExprKind::Sum, lhs, parse_term());
      } else if (consume('-')) {
        lhs = make_binary(ExprKind::Difference, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (consume('*')) {
        lhs = make_binary(ExprKind::Product, lhs, parse_unary());
      } else if (consume('/')) {
        lhs = make_binary(ExprKind::Quotient, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (consume('-')) {
      // -e is represented as 0 - e; power binds tighter, so -x^2 == -(x^2).
      ExprNode zero;
      zero.kind = ExprKind::Constant;
      zero.value = 0.0;
      return make_binary(ExprKind::Difference, make_node(std::move(zero)), parse_unary());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    while (consume('^')) {
      std::size_t at = pos_;
      skip_ws();
      at = pos_;
      NodePtr exp_node = parse_atom();
      std::optional<double> folded = fold_constant(exp_node.get());
      if (!folded) fail(at, "exponent must be a constant");
      double e = *folded;
      if (!(std::floor(e) == e) || std::abs(e) > 1024.0)
        fail(at, "exponent must be an integer in [-1024, 1024]");
      ExprNode n;
      n.kind = ExprKind::Power;
      n.exponent = static_cast<int>(e);
      n.lhs = base;
      base = make_node(std::move(n));
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail(pos_, "unexpected end of input");
    char c = src_[pos_];

    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!consume(')')) fail(pos_, "expected ')'");
      return inner;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();

    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();

    fail(pos_, std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const char* begin = src_.data() + pos_;
    const char* end = src_.data() + src_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) fail(pos_, "malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    ExprNode n;
    n.kind = ExprKind::Constant;
    n.value = value;
    return make_node(std::move(n));
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string_view name = src_.substr(start, pos_ - start);

    if (name == "x" || name == "y") {
      ExprNode n;
      n.kind = ExprKind::Variable;
      n.axis = (name == "x") ? 0 : 1;
      return make_node(std::move(n));
    }
    if (name == "pi") {
      ExprNode n;
      n.kind = ExprKind::Pi;
      return make_node(std::move(n));
    }
    if (name == "sin" || name == "cos" || name == "exp") {
      if (!consume('(')) fail(pos_, "expected '(' after function name");
      NodePtr arg = parse_expr();
      if (!consume(')')) fail(pos_, "expected ')'");
      ExprNode n;
      n.kind = (name == "sin") ? ExprKind::Sin : (name == "cos") ? ExprKind::Cos : ExprKind::Exp;
      n.lhs = std::move(arg);
      return make_node(std::move(n));
    }
    fail(start, "unknown identifier '" + std::string(name) + "'");
  }

  // Folds constant subtrees (used to validate exponents).  Returns nullopt if
  // the subtree references a variable.
  static std::optional<double> fold_constant(const ExprNode* n) {
    switch (n->kind) {
      case ExprKind::Constant: return n->value;
      case ExprKind::Pi: return std::numbers::pi;
      case ExprKind::Variable: return std::nullopt;
      case ExprKind::Sum:
      case ExprKind::Difference:
      case ExprKind::Product:
      case ExprKind::Quotient: {
        auto l = fold_constant(n->lhs.get());
        auto r = fold_constant(n->rhs.get());
        if (!l || !r) return std::nullopt;
        switch (n->kind) {
          case ExprKind::Sum: return *l + *r;
          case ExprKind::Difference: return *l - *r;
          case ExprKind::Product: return *l * *r;
          default: return (*r == 0.0) ? std::nullopt : std::optional<double>(*l / *r);
        }
      }
      case ExprKind::Power: {
        auto l = fold_constant(n->lhs.get());
        if (!l) return std::nullopt;
        return std::pow(*l, n->exponent);
      }
      case ExprKind::Sin:
      case ExprKind::Cos:
      case ExprKind::Exp: {
        auto l = fold_constant(n->lhs.get());
        if (!l) return std::nullopt;
        if (n->kind == ExprKind::Sin) return std::sin(*l);
        if (n->kind == ExprKind::Cos) return std::cos(*l);
        return std::exp(*l);
      }
    }
    return std::nullopt;
  }
};

// Deterministic integer power by binary exponentiation.
double int_pow(double base, int exponent, std::span<const double>) {
  bool negative = exponent < 0;
  unsigned long long e = negative ? static_cast<unsigned long long>(-static_cast<long long>(exponent))
                                  : static_cast<unsigned long long>(exponent);
  double acc = 1.0;
  double b = base;
  while (e != 0) {
    if (e & 1ull) acc *= b;
    b *= b;
    e >>= 1;
  }
  if (negative) {
    if (acc == 0.0) throw EvalError("division by zero in negative power");
    acc = 1.0 / acc;
  }
  return acc;
}

double eval_node(const ExprNode* n, std::span<const double> p) {
  switch (n->kind) {
    case ExprKind::Constant: return n->value;
    case ExprKind::Pi: return std::numbers::pi;
    case ExprKind::Variable:
      if (static_cast<std::size_t>(n->axis) >= p.size())
        throw EvalError("expression references axis " + std::to_string(n->axis) +
                        " but the point has dimension " + std::to_string(p.size()));
      return p[static_cast<std::size_t>(n->axis)];
    case ExprKind::Sum: return eval_node(n->lhs.get(), p) + eval_node(n->rhs.get(), p);
    case ExprKind::Difference: return eval_node(n->lhs.get(), p) - eval_node(n->rhs.get(), p);
    case ExprKind::Product: return eval_node(n->lhs.get(), p) * eval_node(n->rhs.get(), p);
    case ExprKind::Quotient: {
      double denom = eval_node(n->rhs.get(), p);
      if (denom == 0.0) throw EvalError("division by zero");
      return eval_node(n->lhs.get(), p) / denom;
    }
    case ExprKind::Power: return int_pow(eval_node(n->lhs.get(), p), n->exponent, p);
    case ExprKind::Sin: return std::sin(eval_node(n->lhs.get(), p));
    case ExprKind::Cos: return std::cos(eval_node(n->lhs.get(), p));
    case ExprKind::Exp: return std::exp(eval_node(n->lhs.get(), p));
  }
  throw EvalError("corrupt expression node");
}

int max_axis_node(const ExprNode* n) {
  if (n == nullptr) return -1;
  int m = (n->kind == ExprKind::Variable) ? n->axis : -1;
  if (n->lhs) m = std::max(m, max_axis_node(n->lhs.get()));
  if (n->rhs) m = std::max(m, max_axis_node(n->rhs.get()));
  return m;
}

// Precedence levels used by the printer: higher binds tighter.
int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Sum:
    case ExprKind::Difference: return 1;
    case ExprKind::Product:
    case ExprKind::Quotient: return 2;
    case ExprKind::Power: return 3;
    default: return 4;  // atoms and function calls never need parentheses
  }
}

void print_node(const ExprNode* n, std::ostringstream& os) {
  auto child = [&](const ExprNode* c, bool needs_parens) {
    if (needs_parens) os << '(';
    print_node(c, os);
    if (needs_parens) os << ')';
  };
  int prec = precedence(n->kind);
  switch (n->kind) {
    case ExprKind::Constant: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", n->value);
      os << buf;
      return;
    }
    case ExprKind::Pi: os << "pi"; return;
    case ExprKind::Variable: os << (n->axis == 0 ? 'x' : 'y'); return;
    case ExprKind::Sum:
    case ExprKind::Difference:
    case ExprKind::Product:
    case ExprKind::Quotient: {
      // Left child keeps equal precedence bare (operators are left
      // associative); the right child is parenthesized at equal precedence so
      // the re-parse reproduces this exact tree.
      static constexpr const char* ops[] = {" + ", " - ", " * ", " / "};
      int op = (n->kind == ExprKind::Sum)        ? 0
               : (n->kind == ExprKind::Difference) ? 1
               : (n->kind == ExprKind::Product)    ? 2
                                                   : 3;
      child(n->lhs.get(), precedence(n->lhs->kind) < prec);
      os << ops[op];
      child(n->rhs.get(), precedence(n->rhs->kind) <= prec);
      return;
    }
    case ExprKind::Power: {
      child(n->lhs.get(), precedence(n->lhs->kind) <= prec);
      if (n->exponent < 0)
        os << "^(" << n->exponent << ')';
      else
        os << '^' << n->exponent;
      return;
    }
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp: {
      os << (n->kind == ExprKind::Sin ? "sin" : n->kind == ExprKind::Cos ? "cos" : "exp") << '(';
      print_node(n->lhs.get(), os);
      os << ')';
      return;
    }
  }
}

}  // namespace

Expr Expr::parse(std::string_view src) {
  Parser p(src);
  return Expr(p.run());
}

double Expr::eval(std::span<const double> point) const {
  if (!root_) throw EvalError("empty expression");
  double v = eval_node(root_.get(), point);
  if (!std::isfinite(v)) throw EvalError("non-finite expression value");
  return v;
}

double Expr::operator()(double x) const {
  const double p[1] = {x};
  return eval(p);
}

double Expr::operator()(double x, double y) const {
  const double p[2] = {x, y};
  return eval(p);
}

int Expr::max_axis() const noexcept { return max_axis_node(root_.get()); }

std::string Expr::to_string() const {
  if (!root_) return std::string();
  std::ostringstream os;
  print_node(root_.get(), os);
  return os.str();
}

}  // namespace freqcover
