// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "freqcover/expr.hpp"

using freqcover::EvalError;
using freqcover::Expr;
using freqcover::ParseError;

TEST_SUITE_BEGIN("expr");

TEST_CASE("arithmetic and precedence") {
  CHECK(Expr::parse("2 + 3*5")(0.0) == doctest::Approx(17.0).epsilon(1e-15));
  CHECK(Expr::parse("2 + 3*4^2")(0.0) == doctest::Approx(50.0).epsilon(1e-15));
  CHECK(Expr::parse("2^3^2")(0.0) == doctest::Approx(64.0).epsilon(1e-15));  // left-assoc
  CHECK(Expr::parse("(2+3)*4")(0.0) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(Expr::parse("7 - 2 - 1")(0.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(Expr::parse("12 / 4 / 3")(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(Expr::parse("-x^2")(3.0) == doctest::Approx(-9.0).epsilon(1e-15));
  CHECK(Expr::parse("(-x)^2")(3.0) == doctest::Approx(9.0).epsilon(1e-15));
}

TEST_CASE("variables, pi, and functions") {
  CHECK(Expr::parse("x^2 - y^2")(3.0, 2.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(Expr::parse("pi")(0.0) == doctest::Approx(3.1415926535897931).epsilon(1e-16));
  CHECK(Expr::parse("sin(pi*x)")(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(Expr::parse("cos(0)")(0.0) == doctest::Approx(1.0).epsilon(1e-16));
  CHECK(Expr::parse("exp(1)")(0.0) == doctest::Approx(2.7182818284590452).epsilon(1e-15));
  CHECK(Expr::parse("sin(x)^2 + cos(x)^2")(0.7351) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("negative and large exponents") {
  CHECK(Expr::parse("x^(-2)")(2.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(Expr::parse("x^(-1)")(8.0) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(Expr::parse("x^0")(3.7) == doctest::Approx(1.0).epsilon(1e-16));
  CHECK_THROWS_AS((void)Expr::parse("x^-2"), ParseError);
  CHECK_THROWS_AS((void)Expr::parse("x^1.5"), ParseError);
  CHECK_THROWS_AS((void)Expr::parse("x^2000"), ParseError);
}

TEST_CASE("max_axis") {
  CHECK(Expr::parse("3 + pi").max_axis() == -1);
  CHECK(Expr::parse("x").max_axis() == 0);
  CHECK(Expr::parse("y").max_axis() == 1);
  CHECK(Expr::parse("sin(x) + y^3").max_axis() == 1);
}

TEST_CASE("eval errors") {
  CHECK_THROWS_AS((void)Expr::parse("1/x")(0.0), EvalError);
  CHECK_THROWS_AS((void)Expr::parse("y")(1.0), EvalError);  // axis 1, 1D point
  CHECK_THROWS_AS((void)Expr::parse("exp(x)^100")(100.0), EvalError);  // overflow
}

TEST_CASE("parse errors carry byte offsets") {
  auto offset_of = [](const std::string& src) -> std::size_t {
    try {
      (void)Expr::parse(src);
    } catch (const ParseError& e) {
      return e.offset();
    }
    FAIL("expected ParseError for '" << src << "'");
    return 0;
  };
  CHECK(offset_of("2 +") == 3);
  CHECK(offset_of("(1 + 2") == 6);
  CHECK(offset_of("1 + foo(2)") == 4);
  CHECK(offset_of("z") == 0);
  CHECK(offset_of("") == 0);
  CHECK(offset_of("1 + * 2") == 4);
  const std::string msg = [&] {
    try {
      (void)Expr::parse("2 @ 3");
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  }();
  CHECK(msg.find("parse error at byte") != std::string::npos);
}

TEST_CASE("print/parse round trip evaluates identically") {
  const std::vector<std::string> sources = {
      "1",
      "x",
      "y",
      "pi",
      "-x",
      "x + y",
      "x - y - 1",
      "x*y + 2",
      "x / (1 + y^2)",
      "x^3 - 2*x^2 + 0.5",
      "x^(-2) + y^(-1)",
      "sin(pi*x)*cos(pi*y)",
      "exp(0 - (x^2 + y^2))",
      "2^3^2 - x",
      "1 + 1/(1 + 1/(1 + x))",
      "0.5*(x + y) - 0.25*(x - y)^2",
  };
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> dist(0.05, 0.95);
  int cases = 0;
  for (const auto& src : sources) {
    const Expr first = Expr::parse(src);
    const std::string printed = first.to_string();
    const Expr second = Expr::parse(printed);
    CHECK(second.to_string() == printed);  // printing is a fixed point
    for (int trial = 0; trial < 10; ++trial) {
      const double x = dist(gen);
      const double y = dist(gen);
      const double a = first(x, y);
      const double b = second(x, y);
      CHECK(a == b);  // same AST, bitwise-equal evaluation
      ++cases;
    }
  }
  CHECK(cases == 160);
}

TEST_SUITE_END();
