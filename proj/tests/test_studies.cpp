#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "stiffspec/report_io.hpp"
#include "stiffspec/studies.hpp"

using namespace stiffspec;

namespace {

ProblemSpec demo() { return ProblemSpec::make(-1, 2, "1", "1", "1", "1"); }

LimitMode demo_double() {
  LimitMode m;
  m.mu = M_PI * M_PI / 4;
  m.kind = ModeKind::Double;
  return limit_eigenfunction(demo(), m);
}

StudyOptions fast_grid() {
  StudyOptions opt;
  opt.eps_grid = default_eps_grid(5);
  return opt;
}

}  // namespace

TEST_CASE("loglog_slope recovers synthetic rates") {
  std::vector<double> eps = {1e-2, 1e-3, 1e-4, 1e-5};
  std::vector<double> err;
  for (double e : eps) err.push_back(3.7 * std::pow(e, 1.5));
  double ic = 0;
  CHECK(loglog_slope(eps, err, &ic) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(std::exp(ic) == doctest::Approx(3.7).epsilon(1e-10));
}

TEST_CASE("order study on the demo double branches, n=1") {
  ProblemSpec p = demo();
  LimitMode m = demo_double();
  auto [plus, minus] = expand_double(p, m, 2);
  auto opt = fast_grid();
  auto rep = order_study(p, plus, 1, opt);
  CHECK(rep.expected_slope == doctest::Approx(1.0));
  CHECK(rep.pass);
  auto repm = order_study(p, minus, 1, opt);
  CHECK(repm.pass);

  SUBCASE("slope is reproducible on a shifted grid") {
    StudyOptions shifted;
    shifted.eps_grid = default_eps_grid(5, 1.5e-5, 1.5e-2);
    auto rep2 = order_study(p, plus, 1, shifted);
    CHECK(std::abs(rep2.fitted_slope - rep.fitted_slope) < 0.05);
  }
}

TEST_CASE("order study on the exact symmetric mode skips the fit and passes") {
  ProblemSpec p = ProblemSpec::make(-2, 2, "1", "1", "1", "1");
  LimitMode m;
  m.mu = M_PI * M_PI / 16;
  m.kind = ModeKind::SimpleLeft;
  auto s = expand_simple_left(p, m, 2);
  REQUIRE(s.exact_flag);
  auto rep = order_study(p, s, 0, fast_grid());
  CHECK(rep.fit_skipped);
  CHECK(rep.pass);
}

TEST_CASE("order study on a variable-coefficient simple mode, n=0") {
  ProblemSpec p = ProblemSpec::make(-1, 2, "2+x*x", "1", "1", "1+x/4");
  LimitMode m;
  m.mu = right_pinned_first(p, 1)[0];
  m.kind = ModeKind::SimpleRight;
  auto s = expand_simple_right(p, m, 1);
  auto rep = order_study(p, s, 0, fast_grid());
  CHECK(rep.expected_slope == doctest::Approx(1.0));
  CHECK(rep.pass);
}

TEST_CASE("eigenfunction error study reports a positive normalizing multiplier") {
  ProblemSpec p = demo();
  LimitMode m = demo_double();
  auto [plus, minus] = expand_double(p, m, 1);
  auto rep = eigenfunction_error_study(p, plus, 1, fast_grid());
  CHECK(rep.expected_slope == doctest::Approx(1.0));
  CHECK(rep.pass);
  for (double theta : rep.aux) CHECK(theta > 0.5);
}

TEST_CASE("angle study: collapse at rate 1/2 with weighted orthogonality intact") {
  ProblemSpec p = demo();
  auto rep = angle_study(p, demo_double(), fast_grid());
  CHECK(rep.pass);
  CHECK(rep.fitted_slope == doctest::Approx(0.5).epsilon(0.3));
  for (double o : rep.aux) CHECK(o < 1e-8);
}

TEST_CASE("projector study: root space is the limit of the eigenfunction plane") {
  ProblemSpec p = demo();
  auto rep = projector_study(p, demo_double(), fast_grid());
  CHECK(rep.pass);
  CHECK(rep.errors.back() < 0.05);
  // The difference-quotient basis vector approaches the adjoined line.
  CHECK(rep.aux.back() < rep.aux.front());
}

TEST_CASE("quasimode residual and containment") {
  ProblemSpec p = demo();
  SUBCASE("an exact eigenpair gives a residual at the numeric floor") {
    ProblemSpec ps = ProblemSpec::make(-2, 2, "1", "1", "1", "1");
    LimitMode m;
    m.mu = M_PI * M_PI / 16;
    m.kind = ModeKind::SimpleLeft;
    auto s = expand_simple_left(ps, m, 2);
    PartialSum sum = partial_sum(s, 1e-2);
    CHECK(quasimode_residual(ps, 1e-2, sum) < 1e-8);
  }
  SUBCASE("double branch, n=3, eps=1e-3: nearest eigenvalue within sigma") {
    LimitMode m = demo_double();
    auto [plus, minus] = expand_double(p, m, 3);
    for (const auto* s : {&plus, &minus}) {
      PartialSum sum = partial_sum(*s, 1e-3);
      auto chk = quasimode_containment(p, 1e-3, sum);
      CHECK(chk.contained);
      CHECK(chk.sigma < 1e-4);
    }
  }
  SUBCASE("residual decays like eps^{n/2} or better on the double branch") {
    LimitMode m = demo_double();
    auto [plus, minus] = expand_double(p, m, 2);
    std::vector<double> grid = {1e-2, 1e-3, 1e-4};
    for (int n : {1, 2}) {
      std::vector<double> sig;
      for (double eps : grid)
        sig.push_back(quasimode_residual(p, eps, partial_sum(plus, eps, n)));
      CHECK(loglog_slope(grid, sig) >= 0.5 * n - 0.15);
    }
  }
}

TEST_CASE("H2 subinterval error decreases monotonically for simple modes") {
  ProblemSpec p = demo();
  LimitMode m;
  m.mu = M_PI * M_PI;
  m.kind = ModeKind::SimpleRight;
  auto rep = h2_tail_study(p, m, fast_grid());
  CHECK(rep.pass);
}

TEST_CASE("bounds check on the demo problem") {
  ProblemSpec p = demo();
  auto rep = bounds_check(p, {1e-2, 1e-3}, 2);
  CHECK(rep.pass);
  REQUIRE(rep.rows.size() == 4);
  for (const auto& row : rep.rows) {
    CHECK(row.lambda <= row.upper * (1 + 1e-9));
    CHECK(row.lambda >= row.lower * (1 - 1e-9));
  }
}

TEST_CASE("report emission is deterministic and self-describing") {
  ConvergenceReport rep;
  rep.quantity = "demo";
  rep.eps_grid = {1e-2, 1e-3};
  rep.errors = {1e-3, 1e-4};
  rep.fitted_slope = 1.0;
  rep.expected_slope = 1.0;
  rep.pass = true;
  std::string csv1 = convergence_csv(rep, "hash=" + text_hash("cfg"));
  std::string csv2 = convergence_csv(rep, "hash=" + text_hash("cfg"));
  CHECK(csv1 == csv2);
  CHECK(csv1.find("0.001") != std::string::npos);
  auto j = convergence_json(rep);
  CHECK(j["pass"].get<bool>());
  CHECK(j["series"].size() == 2);
}
