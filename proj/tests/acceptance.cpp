// Acceptance suite: runs every quantitative gate end to end and prints one
// pass/fail line per criterion. Exit code 0 iff everything passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "stiffspec/expansion.hpp"
#include "stiffspec/limit_spectrum.hpp"
#include "stiffspec/studies.hpp"
#include "stiffspec/transmission.hpp"
#include "support/fd_oracle.hpp"

using namespace stiffspec;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", idx,
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run(int idx, const std::string& name,
         const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [pass, detail] = body();
    report(idx, name, pass, detail);
  } catch (const std::exception& e) {
    report(idx, name, false, std::string("exception: ") + e.what());
  }
}

ProblemSpec demo() { return ProblemSpec::make(-1, 2, "1", "1", "1", "1"); }

ProblemSpec variable_problem() {
  return ProblemSpec::make(-1, 2, "2+x*x", "1", "1", "1+x/4");
}

double demo_mu_exact(double eps, int branch) {
  return std::pow(M_PI / 2 + branch * std::asin(std::sqrt(eps / (2 + 2 * eps))), 2);
}

LimitMode demo_mode(double mu, ModeKind kind) {
  LimitMode m;
  m.mu = mu;
  m.kind = kind;
  return m;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

int main() {
  const ProblemSpec p_demo = demo();
  const ProblemSpec p_var = variable_problem();
  const double mu_d1 = M_PI * M_PI / 4;
  const double mu_d2 = 9 * M_PI * M_PI / 4;

  // 1. Closed-form reproduction of the bifurcating pair.
  run(1, "closed-form pair, eps in {1e-2,1e-3,1e-4}, rel 1e-9, < 5 s", [&] {
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      auto evs = eigenvalues(p_demo, eps, 2);
      for (int j = 0; j < 2; ++j) {
        double exact = eps * demo_mu_exact(eps, j == 0 ? -1 : +1);
        worst = std::max(worst, std::abs(evs[j].lambda - exact) / exact);
      }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = worst <= 1e-9 && secs < 5.0;
    return std::make_pair(pass, "worst rel err " + fmt(worst) + ", " + fmt(secs) + " s");
  });

  // 2. Limit spectrum classification and the Jordan coupling.
  run(2, "limit classification + omega(pi^2/4) = pi/sqrt(2) within 1e-9", [&] {
    auto spec = classify(left_free_spectrum(p_demo, 45.0),
                         right_pinned_spectrum(p_demo, 45.0));
    bool kinds_ok = spec.modes.size() == 6 &&
                    spec.modes[0].kind == ModeKind::Double &&
                    spec.modes[1].kind == ModeKind::Double &&
                    spec.modes[2].kind == ModeKind::SimpleRight &&
                    spec.modes[3].kind == ModeKind::Double &&
                    spec.modes[4].kind == ModeKind::Double &&
                    spec.modes[5].kind == ModeKind::SimpleRight;
    bool mus_ok = kinds_ok &&
                  std::abs(spec.modes[0].mu - mu_d1) < 1e-9 &&
                  std::abs(spec.modes[2].mu - M_PI * M_PI) < 1e-9 &&
                  std::abs(spec.modes[3].mu - mu_d2) < 1e-8 &&
                  std::abs(spec.modes[5].mu - 4 * M_PI * M_PI) < 1e-8;
    LimitMode dm = adjoined_vector(p_demo, demo_mode(mu_d1, ModeKind::Double));
    double omega = *dm.coupling;
    double err_exact = std::abs(omega - M_PI / std::sqrt(2.0));
    // Cross-check against the sqrt(eps)-coefficient of the closed form.
    double eps = 1e-10;
    double extracted = (demo_mu_exact(eps, +1) - demo_mu_exact(eps, -1)) /
                       (2 * std::sqrt(eps));
    double err_x = std::abs(omega - extracted);
    bool pass = mus_ok && err_exact <= 1e-9 && err_x <= 1e-9;
    return std::make_pair(pass, "omega err " + fmt(err_exact) +
                                    ", closed-form cross-check err " + fmt(err_x));
  });

  // Shared expansions of the first demo double mode.
  LimitMode dmode1 = adjoined_vector(p_demo, demo_mode(mu_d1, ModeKind::Double));
  auto [dplus, dminus] = expand_double(p_demo, dmode1, 3);

  // 3. Half-power order law on both branches.
  run(3, "double-branch order law: slope (n+1)/2 within 0.15 for n=1,2,3", [&] {
    StudyOptions opt;
    opt.eps_grid = default_eps_grid(7);
    std::string detail;
    bool pass = true;
    for (int n = 1; n <= 3; ++n) {
      for (const ExpansionSeries* s : {&dplus, &dminus}) {
        auto rep = order_study(p_demo, *s, n, opt);
        pass = pass && rep.pass;
        if (s == &dplus)
          detail += (detail.empty() ? "" : ", ") + std::string("n=") +
                    std::to_string(n) + ": " + fmt(rep.fitted_slope);
      }
    }
    return std::make_pair(pass, "fitted slopes " + detail);
  });

  // 4. Integer-power order law on a variable-coefficient simple mode.
  run(4, "simple-mode order law: slope n+1 within 0.15 for n=0,1", [&] {
    LimitMode sm = demo_mode(right_pinned_first(p_var, 1)[0], ModeKind::SimpleRight);
    auto s = expand_simple_right(p_var, sm, 1);
    StudyOptions opt;
    opt.eps_grid = default_eps_grid(7);
    auto r0 = order_study(p_var, s, 0, opt);
    auto r1 = order_study(p_var, s, 1, opt);
    bool pass = r0.pass && r1.pass;
    return std::make_pair(pass, "slopes " + fmt(r0.fitted_slope) + ", " +
                                    fmt(r1.fitted_slope));
  });

  // 5. The interrupted (exact) construction on the symmetric interval.
  run(5, "exact eigenvalue eps*pi^2/16 with eps-independent eigenfunction", [&] {
    ProblemSpec p = ProblemSpec::make(-2, 2, "1", "1", "1", "1");
    const double mu = M_PI * M_PI / 16;
    double worst_mu = 0;
    std::vector<EigenPair> funcs;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      auto evs = eigenvalues(p, eps, 1);
      worst_mu = std::max(worst_mu,
                          std::abs(evs[0].lambda - eps * mu) / (eps * mu));
      funcs.push_back(eigenfunction(p, eps, evs[0]));
    }
    auto s = expand_simple_left(p, demo_mode(mu, ModeKind::SimpleLeft), 3);
    double worst_fun = 0;
    for (int i = 0; i <= 200; ++i) {
      double x = -2.0 + 4.0 * i / 200.0;
      double ref = funcs[0].trace().value(x);
      for (std::size_t k = 1; k < funcs.size(); ++k)
        worst_fun = std::max(worst_fun, std::abs(funcs[k].trace().value(x) - ref));
    }
    bool pass = worst_mu < 1e-10 && s.exact_flag && worst_fun < 1e-9;
    return std::make_pair(pass, "rel dev " + fmt(worst_mu) + ", exact_flag " +
                                    (s.exact_flag ? "set" : "MISSING") +
                                    ", trace sup dev " + fmt(worst_fun));
  });

  // 6. Two-sided eigenvalue bounds.
  run(6, "comparison bounds hold for j <= 6 on demo and variable problems", [&] {
    auto grid = default_eps_grid(7);
    auto b1 = bounds_check(p_demo, grid, 6);
    auto b2 = bounds_check(p_var, grid, 6);
    int bad = 0;
    for (const auto& r : b1.rows) bad += !r.ok;
    for (const auto& r : b2.rows) bad += !r.ok;
    return std::make_pair(b1.pass && b2.pass,
                          std::to_string(bad) + " violations of " +
                              std::to_string(b1.rows.size() + b2.rows.size()));
  });

  // 7. Angle collapse with intact weighted orthogonality.
  run(7, "pair angle decays at rate 1/2 while staying metric-orthogonal", [&] {
    StudyOptions opt;
    opt.eps_grid = default_eps_grid(7);
    auto rep = angle_study(p_demo, dmode1, opt);
    double worst = 0;
    for (double o : rep.aux) worst = std::max(worst, o);
    return std::make_pair(rep.pass, "slope " + fmt(rep.fitted_slope) +
                                        ", worst (u-,u+)_eps " + fmt(worst));
  });

  // 8. Root-space projector convergence.
  run(8, "projector distance decreasing, < 0.05 at eps=1e-5; g on the adjoined line", [&] {
    StudyOptions opt;
    opt.eps_grid = default_eps_grid(7);
    auto rep = projector_study(p_demo, dmode1, opt);
    bool gdecay = rep.aux.back() < 0.5 * rep.aux.front();
    bool pass = rep.pass && gdecay;
    return std::make_pair(pass, "last distance " + fmt(rep.errors.back()) +
                                    ", g-line distance " + fmt(rep.aux.back()));
  });

  // 9. Quasimode containment for every constructed partial sum.
  run(9, "eigenvalue within sigma of every partial sum (all modes, n <= 3)", [&] {
    auto grid = default_eps_grid(7);
    int checks = 0, violations = 0;
    double worst_margin = 0;

    auto check_sum = [&](const ProblemSpec& p, const ExpansionSeries& s, int n) {
      for (double eps : grid) {
        auto chk = quasimode_containment(p, eps, partial_sum(s, eps, n));
        ++checks;
        if (!chk.contained) ++violations;
        if (chk.sigma > 0)
          worst_margin = std::max(worst_margin, chk.distance / chk.sigma);
      }
    };

    // Double modes: both branches, n = 1..3.
    LimitMode dmode2 = adjoined_vector(p_demo, demo_mode(mu_d2, ModeKind::Double));
    auto [p2, m2] = expand_double(p_demo, dmode2, 3);
    for (int n = 1; n <= 3; ++n) {
      check_sum(p_demo, dplus, n);
      check_sum(p_demo, dminus, n);
      check_sum(p_demo, p2, n);
      check_sum(p_demo, m2, n);
    }
    // Simple modes: n = 0..3.
    auto s1 = expand_simple_right(p_demo, demo_mode(M_PI * M_PI, ModeKind::SimpleRight), 3);
    auto s2 = expand_simple_right(p_demo, demo_mode(4 * M_PI * M_PI, ModeKind::SimpleRight), 3);
    for (int n = 0; n <= 3; ++n) {
      check_sum(p_demo, s1, n);
      check_sum(p_demo, s2, n);
    }
    return std::make_pair(violations == 0,
                          std::to_string(checks) + " checks, " +
                              std::to_string(violations) +
                              " violations, worst distance/sigma " +
                              fmt(worst_margin));
  });

  // 10. Independent finite-difference oracle.
  run(10, "FD oracle agreement, three variable problems, j <= 4, rel 1e-6", [&] {
    std::vector<ProblemSpec> probs = {
        p_var,
        ProblemSpec::make(-1, 2, "1+exp(x)/2", "2+sin(3*x)", "1+x^2/3", "2+cos(x)"),
        ProblemSpec::make(-1.3, 1.7, "1+x*x", "1+x^2/2", "2-x/3", "1+x/5"),
    };
    const double eps = 1e-2;
    double worst = 0;
    for (const auto& p : probs) {
      auto fd = testsupport::fd_eigenvalues_extrapolated(p, eps, 4, 4000);
      auto evs = eigenvalues(p, eps, 4);
      for (int j = 0; j < 4; ++j)
        worst = std::max(worst, std::abs(evs[j].mu - fd[j]) / fd[j]);
    }
    return std::make_pair(worst <= 1e-6, "worst rel diff " + fmt(worst));
  });

  // 11. The +/- branch symmetry of the half-power correctors.
  run(11, "sign law nu_m^- = (-1)^m nu_m^+ to 1e-9 on all double expansions", [&] {
    LimitMode dmode2 = adjoined_vector(p_demo, demo_mode(mu_d2, ModeKind::Double));
    auto [p2, m2] = expand_double(p_demo, dmode2, 3);
    double worst = 0;
    auto check_pair = [&](const ExpansionSeries& plus, const ExpansionSeries& minus) {
      for (std::size_t m = 1; m <= plus.nu.size(); ++m)
        worst = std::max(worst, std::abs(minus.nu[m - 1] -
                                         std::pow(-1.0, m) * plus.nu[m - 1]));
    };
    check_pair(dplus, dminus);
    check_pair(p2, m2);
    return std::make_pair(worst <= 1e-9, "worst deviation " + fmt(worst));
  });

  std::printf("%s: %d criterion(s) failed\n", g_failures ? "FAIL" : "OK",
              g_failures);
  return g_failures ? 1 : 0;
}
