#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cmath>
#include <random>

#include "stiffspec/expr.hpp"
#include "stiffspec/problem.hpp"

using namespace stiffspec;

TEST_CASE("constants and primitives evaluate directly") {
  auto one = CoeffExpr::parse("1");
  CHECK(one(0.0) == 1.0);
  CHECK(one(-3.7) == 1.0);

  auto e = CoeffExpr::parse("2 + sin(x)");
  CHECK(e(0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(e(1.0) == doctest::Approx(2.0 + std::sin(1.0)).epsilon(1e-15));

  auto sq = CoeffExpr::parse("x*x");
  CHECK(sq(-0.5) == doctest::Approx(0.25).epsilon(1e-16));

  auto ex = CoeffExpr::parse("exp(x)");
  CHECK(ex(1.0) == doctest::Approx(2.718281828459045).epsilon(1e-15));

  auto pw = CoeffExpr::parse("x^3 + pi^2");
  CHECK(pw(2.0) == doctest::Approx(8.0 + M_PI * M_PI).epsilon(1e-15));

  auto neg = CoeffExpr::parse("-x + 2^-1");
  CHECK(neg(1.0) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("evaluation is deterministic (bit-identical)") {
  auto e = CoeffExpr::parse("sin(x)*exp(x/3) + sqrt(x+2)^3");
  for (double x : {-1.0, 0.0, 0.3, 2.7}) {
    double a = e(x), b = e(x);
    CHECK(std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b));
  }
}

TEST_CASE("syntax errors carry positions") {
  CHECK_THROWS_AS(CoeffExpr::parse("2 +"), ParseError);
  CHECK_THROWS_AS(CoeffExpr::parse("foo(x)"), ParseError);
  CHECK_THROWS_AS(CoeffExpr::parse("sin x"), ParseError);
  CHECK_THROWS_AS(CoeffExpr::parse("1 + (2"), ParseError);
  CHECK_THROWS_AS(CoeffExpr::parse("x^1.5"), ParseError);
  try {
    CoeffExpr::parse("1 + bar");
  } catch (const ParseError& pe) {
    CHECK(pe.position == 4);
  }
}

TEST_CASE("pole inside the interval is rejected at validation") {
  auto e = CoeffExpr::parse("1/(2 - 3*x)");
  auto issue = e.domain_issue(0.0, 1.0);
  REQUIRE(issue.has_value());
  CHECK(issue->find("division") != std::string::npos);
  // The same expression is fine on an interval that excludes the pole.
  CHECK_FALSE(e.domain_issue(0.0, 0.5).has_value());
}

TEST_CASE("sqrt of a non-positive argument is rejected") {
  auto e = CoeffExpr::parse("sqrt(x)");
  CHECK(e.domain_issue(0.0, 1.0).has_value());
  CHECK_FALSE(e.domain_issue(0.5, 1.0).has_value());
}

namespace {

// Random expression trees exercising the whole grammar.
std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 9);
  std::uniform_real_distribution<double> cst(0.1, 3.0);
  switch (pick(rng)) {
    case 0: return std::to_string(cst(rng));
    case 1: return "x";
    case 2: return "pi";
    case 3: return "e";
    case 4: return "(" + random_expr(rng, depth - 1) + "+" + random_expr(rng, depth - 1) + ")";
    case 5: return "(" + random_expr(rng, depth - 1) + "-" + random_expr(rng, depth - 1) + ")";
    case 6: return "(" + random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1) + ")";
    case 7: return "sin(" + random_expr(rng, depth - 1) + ")";
    case 8: return "cos(" + random_expr(rng, depth - 1) + ")";
    default: return "(" + random_expr(rng, depth - 1) + ")^2";
  }
}

}  // namespace

TEST_CASE("parse-print-parse round trip is bit-exact at 1000 points") {
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> xs(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::string src = random_expr(rng, 4);
    auto e1 = CoeffExpr::parse(src);
    auto e2 = CoeffExpr::parse(e1.canonical());
    for (int i = 0; i < 1000; ++i) {
      double x = xs(rng);
      CHECK(std::bit_cast<std::uint64_t>(e1(x)) ==
            std::bit_cast<std::uint64_t>(e2(x)));
    }
  }
}

TEST_CASE("grammar closure: accepted expressions evaluate cleanly on screened intervals") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    auto e = CoeffExpr::parse(random_expr(rng, 3));
    if (e.domain_issue(-1.0, 1.0).has_value()) continue;
    for (int i = 0; i <= 500; ++i) {
      double x = -1.0 + 2.0 * i / 500.0;
      CHECK(std::isfinite(e(x)));
    }
  }
}

TEST_CASE("validate_problem reports margins and failures") {
  SUBCASE("constant demo problem is clean") {
    ProblemSpec p = ProblemSpec::make(-1, 2, "1", "1", "1", "1");
    auto rep = validate_problem(p);
    CHECK(rep.ok);
    CHECK(rep.min_k == doctest::Approx(1.0));
    CHECK(rep.min_r == doctest::Approx(1.0));
    CHECK(rep.min_kappa == doctest::Approx(1.0));
    CHECK(rep.min_rho == doctest::Approx(1.0));
  }
  SUBCASE("wrong endpoint order fails") {
    ProblemSpec p;
    p.a = 1;
    p.b = 2;
    p.k = CoeffExpr::parse("1");
    p.r = CoeffExpr::parse("1");
    p.kappa = CoeffExpr::parse("1");
    p.rho = CoeffExpr::parse("1");
    auto rep = validate_problem(p);
    CHECK_FALSE(rep.ok);
    CHECK_THROWS_AS(ProblemSpec::make(1, 2, "1", "1", "1", "1"),
                    std::invalid_argument);
  }
  SUBCASE("non-positive coefficient fails") {
    ProblemSpec p;
    p.a = -1;
    p.b = 2;
    p.k = CoeffExpr::parse("x");  // <= 0 on [-1,0]
    p.r = CoeffExpr::parse("1");
    p.kappa = CoeffExpr::parse("1");
    p.rho = CoeffExpr::parse("1");
    auto rep = validate_problem(p);
    CHECK_FALSE(rep.ok);
    REQUIRE_FALSE(rep.failures.empty());
    CHECK(rep.failures.front().find("k") != std::string::npos);
  }
  SUBCASE("variable positive coefficients pass") {
    ProblemSpec p = ProblemSpec::make(-1, 2, "2+x*x", "1", "1", "1+x/4");
    CHECK(validate_problem(p).ok);
  }
}
