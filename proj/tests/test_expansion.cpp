#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "stiffspec/expansion.hpp"
#include "stiffspec/quadrature.hpp"
#include "stiffspec/studies.hpp"
#include "stiffspec/transmission.hpp"

using namespace stiffspec;

namespace {

ProblemSpec demo() { return ProblemSpec::make(-1, 2, "1", "1", "1", "1"); }

LimitMode demo_double() {
  LimitMode m;
  m.mu = M_PI * M_PI / 4;
  m.kind = ModeKind::Double;
  return limit_eigenfunction(demo(), m);
}

// Exact demo branch values: mu_pm(eps) = (pi/2 -+ asin(sqrt(eps/(2+2eps))))^2.
double demo_mu_exact(double eps, int branch) {
  return std::pow(M_PI / 2 + branch * std::asin(std::sqrt(eps / (2 + 2 * eps))), 2);
}

}  // namespace

TEST_CASE("simple-left series: interrupted (exact) case on the symmetric interval") {
  ProblemSpec p = ProblemSpec::make(-2, 2, "1", "1", "1", "1");
  LimitMode m;
  m.mu = M_PI * M_PI / 16;
  m.kind = ModeKind::SimpleLeft;
  auto s = expand_simple_left(p, m, 4);
  CHECK(s.exact_flag);
  CHECK(s.order == 0);
  CHECK(s.nu.empty());
}

TEST_CASE("simple-left series on an incommensurable interval") {
  // a=-1, b=sqrt(2), constants; mu = (pi/2)^2 is a left mode. Closed form:
  // nu_1 = -(kappa z0')(0) y0(0) = pi cot(pi/sqrt(2)).
  ProblemSpec p = ProblemSpec::make(-1.0, std::sqrt(2.0), "1", "1", "1", "1");
  LimitMode m;
  m.mu = M_PI * M_PI / 4;
  m.kind = ModeKind::SimpleLeft;
  auto s = expand_simple_left(p, m, 2);
  REQUIRE(s.order == 2);
  const double nu1_exact = M_PI / std::tan(M_PI / std::sqrt(2.0));
  CHECK(s.nu[0] == doctest::Approx(nu1_exact).epsilon(1e-9));

  SUBCASE("recomputed nu from the stored traces is identical") {
    double flux = s.kappa0 * s.right_coeffs[0].deriv(0.0);
    double recomputed = -flux * s.left_coeffs[0].value(0.0);
    CHECK(recomputed == doctest::Approx(s.nu[0]).epsilon(1e-13));
    double flux2 = s.kappa0 * s.right_coeffs[1].deriv(0.0);
    CHECK(-flux2 * s.left_coeffs[0].value(0.0) ==
          doctest::Approx(s.nu[1]).epsilon(1e-12));
  }
  SUBCASE("orthogonality ledger: int r y_m y_0 = 0") {
    for (int mm = 1; mm <= 2; ++mm) {
      double ip = trace_product_integral(nullptr, s.left_coeffs[mm], s.left_coeffs[0]);
      CHECK(std::abs(ip) < 1e-9);
    }
  }
  SUBCASE("extrapolation oracle against the perturbed solver") {
    // (mu_eps - mu)/eps -> nu_1 as eps -> 0.
    for (double eps : {1e-4, 1e-5}) {
      auto ev = eigenvalues_near(p, eps, m.mu, 1, 1.5);
      double est = (ev[0].mu - m.mu) / eps;
      CHECK(est == doctest::Approx(s.nu[0]).epsilon(2e-3));
    }
    // Second order: subtracting the order-1 sum isolates nu_2 eps^2.
    double eps = 1e-4;
    auto ev = eigenvalues_near(p, eps, m.mu, 1, 1.5);
    double est2 = (ev[0].mu - m.mu - eps * s.nu[0]) / (eps * eps);
    CHECK(est2 == doctest::Approx(s.nu[1]).epsilon(2e-2));
  }
}

TEST_CASE("simple-right series at the demo mu = pi^2 mode collapses") {
  // The interface accident makes mu exactly eps-independent: all nu vanish
  // and y_1 = -sin(pi(x+1)) carries the whole left response.
  ProblemSpec p = demo();
  LimitMode m;
  m.mu = M_PI * M_PI;
  m.kind = ModeKind::SimpleRight;
  auto s = expand_simple_right(p, m, 2);
  CHECK(std::abs(s.nu[0]) < 1e-10);
  CHECK(std::abs(s.nu[1]) < 1e-10);
  CHECK(s.left_coeffs[1].value(-0.5) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(s.right_coeffs[1].sup_scale() < 1e-9);  // z_1 = 0
  SUBCASE("y_0 is stored as the zero trace") {
    CHECK(s.left_coeffs[0].sup_scale() == 0.0);
  }
  SUBCASE("rho-orthogonality of z_m to z_0") {
    double ip = trace_product_integral(nullptr, s.right_coeffs[1], s.right_coeffs[0]);
    CHECK(std::abs(ip) < 1e-9);
  }
}

TEST_CASE("simple-right series on a variable-coefficient problem") {
  ProblemSpec p = ProblemSpec::make(-1, 2, "2+x*x", "1", "1", "1+x/4");
  auto rp = right_pinned_first(p, 1);
  LimitMode m;
  m.mu = rp[0];
  m.kind = ModeKind::SimpleRight;
  auto s = expand_simple_right(p, m, 1);
  REQUIRE(s.order == 1);
  CHECK(std::abs(s.nu[0]) > 1e-3);  // generic: the eigenvalue moves

  // Extrapolation oracle: (mu_eps - mu)/eps -> nu_1.
  for (double eps : {1e-4, 1e-5}) {
    auto ev = eigenvalues_near(p, eps, m.mu, 1, 0.5);
    double est = (ev[0].mu - m.mu) / eps;
    CHECK(est == doctest::Approx(s.nu[0]).epsilon(5e-3));
  }
}

TEST_CASE("double-mode branches on the demo problem") {
  ProblemSpec p = demo();
  LimitMode m = demo_double();
  auto [plus, minus] = expand_double(p, m, 3);
  const double omega = M_PI / std::sqrt(2.0);

  SUBCASE("leading correctors are +-omega") {
    CHECK(plus.nu[0] == doctest::Approx(omega).epsilon(1e-10));
    CHECK(minus.nu[0] == doctest::Approx(-omega).epsilon(1e-10));
  }
  SUBCASE("closed-form higher correctors") {
    // From the exact root expansion:
    //   mu_pm = pi^2/4 +- omega sqrt(eps) + eps/2 -+ (5 pi/(12 sqrt 2)) eps^{3/2} + ...
    CHECK(plus.nu[1] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(minus.nu[1] == doctest::Approx(0.5).epsilon(1e-9));
    const double nu3 = -5 * M_PI / (12 * std::sqrt(2.0));
    CHECK(plus.nu[2] == doctest::Approx(nu3).epsilon(1e-7));
    CHECK(minus.nu[2] == doctest::Approx(-nu3).epsilon(1e-7));
  }
  SUBCASE("sign law for the eigenvalue correctors") {
    for (int mm = 1; mm <= 3; ++mm)
      CHECK(minus.nu[mm - 1] == doctest::Approx(std::pow(-1.0, mm) * plus.nu[mm - 1])
                                    .epsilon(1e-9).scale(1.0));
  }
  SUBCASE("sign law for the coefficient traces (pointwise)") {
    for (int mm = 1; mm <= 3; ++mm) {
      double sgn = std::pow(-1.0, mm);
      for (double x : {-0.8, -0.4, -0.1})
        CHECK(minus.left_coeffs[mm].value(x) ==
              doctest::Approx(sgn * plus.left_coeffs[mm].value(x)).epsilon(1e-8).scale(1.0));
      for (double x : {0.3, 1.0, 1.7})
        CHECK(minus.right_coeffs[mm].value(x) ==
              doctest::Approx(sgn * plus.right_coeffs[mm].value(x)).epsilon(1e-8).scale(1.0));
    }
  }
  SUBCASE("closed-form first coefficient traces of the plus branch") {
    // v_1^+ = (x-2) cos(pi x/2)/sqrt(2); w_2^+ = (x+1) sin(pi x/2).
    auto v1 = [](double x) { return (x - 2) * std::cos(M_PI * x / 2) / std::sqrt(2.0); };
    auto w2 = [](double x) { return (x + 1) * std::sin(M_PI * x / 2); };
    for (double x : {0.25, 0.5, 1.5})
      CHECK(plus.right_coeffs[1].value(x) == doctest::Approx(v1(x)).epsilon(1e-8).scale(1.0));
    for (double x : {-0.75, -0.5, -0.25})
      CHECK(plus.left_coeffs[2].value(x) == doctest::Approx(w2(x)).epsilon(1e-8).scale(1.0));
    // w_1^+ = -w = -sqrt(2) cos(pi x /2).
    CHECK(plus.left_coeffs[1].value(0.0) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-9));
  }
  SUBCASE("the first left coefficient solves its homogeneous problem") {
    auto one = [](double) { return 1.0; };
    CHECK(ode_residual(one, one, m.mu, nullptr, plus.left_coeffs[1]) < 1e-8);
  }
  SUBCASE("partial sums track the exact roots to the expected order") {
    double eps = 1e-4;
    PartialSum ps3 = partial_sum(plus, eps, 3);
    CHECK(std::abs(ps3.Lambda / eps - demo_mu_exact(eps, +1)) < 1e-8);
    PartialSum ms3 = partial_sum(minus, eps, 3);
    CHECK(std::abs(ms3.Lambda / eps - demo_mu_exact(eps, -1)) < 1e-8);
  }
}

TEST_CASE("fault injection: corrupted nu_1 trips the solvability check") {
  ProblemSpec p = demo();
  LimitMode m = demo_double();
  ExpandOptions opt;
  opt.nu1_override = M_PI / std::sqrt(2.0) + 0.05;
  CHECK_THROWS_AS(expand_double(p, m, 2, opt), NumericalError);
}

TEST_CASE("partial sums satisfy the corrected interface conditions") {
  ProblemSpec p = demo();
  LimitMode m = demo_double();
  auto [plus, minus] = expand_double(p, m, 3);

  for (double eps : {1e-2, 1e-4}) {
    PartialSum ps = partial_sum(plus, eps);
    CHECK(std::abs(ps.V.left.value(p.a)) < 1e-12);
    CHECK(std::abs(ps.V.right.value(p.b)) < 1e-12);
    CHECK(ps.V.left.value(0.0) ==
          doctest::Approx(ps.V.right.value(0.0)).epsilon(1e-12));
    // Exact flux match after the corrector.
    double fl = plus.k0 * ps.V.left.deriv(0.0);
    double fr = eps * plus.kappa0 * ps.V.right.deriv(0.0);
    double scale = std::abs(fl) + std::abs(fr) + 1.0;
    CHECK(std::abs(fl - fr) < 1e-10 * scale);
  }
}

TEST_CASE("interface-defect decay rates") {
  ProblemSpec p = demo();

  SUBCASE("double branch: beta = O(eps^{(n+1)/2})") {
    LimitMode m = demo_double();
    auto [plus, minus] = expand_double(p, m, 3);
    for (int n : {1, 2, 3}) {
      std::vector<double> grid = {1e-2, 1e-3, 1e-4, 1e-5};
      std::vector<double> beta;
      for (double eps : grid)
        beta.push_back(std::abs(partial_sum(plus, eps, n).beta_resid));
      double slope = loglog_slope(grid, beta);
      CHECK(slope >= 0.5 * (n + 1) - 0.15);
    }
  }
  SUBCASE("single branch: beta = O(eps^{n+1})") {
    ProblemSpec ps = ProblemSpec::make(-1.0, std::sqrt(2.0), "1", "1", "1", "1");
    LimitMode m;
    m.mu = M_PI * M_PI / 4;
    m.kind = ModeKind::SimpleLeft;
    auto s = expand_simple_left(ps, m, 2);
    for (int n : {0, 1}) {
      std::vector<double> grid = {1e-2, 1e-3, 1e-4};
      std::vector<double> beta;
      for (double eps : grid)
        beta.push_back(std::abs(partial_sum(s, eps, n).beta_resid));
      double slope = loglog_slope(grid, beta);
      CHECK(slope >= (n + 1) - 0.15);
    }
  }
}

TEST_CASE("order cap") {
  ProblemSpec p = demo();
  LimitMode m = demo_double();
  auto [plus, minus] = expand_double(p, m, 9);
  CHECK(plus.order == kMaxExpansionOrder);
}
