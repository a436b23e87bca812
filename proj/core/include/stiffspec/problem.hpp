#pragma once

#include <string>
#include <vector>

#include "stiffspec/expr.hpp"

namespace stiffspec {

/// The two-material transmission problem data: an interval (a,0) u (0,b)
/// with rigidity/density pairs (k, r) on the left part and (kappa, rho)
/// on the right part. All four coefficients must be smooth and strictly
/// positive on their closed subintervals.
struct ProblemSpec {
  double a = -1.0;  // left endpoint, a < 0
  double b = 1.0;   // right endpoint, b > 0
  CoeffExpr k;      // rigidity on [a,0]
  CoeffExpr r;      // density on [a,0]
  CoeffExpr kappa;  // rigidity on [0,b]
  CoeffExpr rho;    // density on [0,b]

  /// Parse + validate convenience; throws std::invalid_argument on a
  /// validation failure and ParseError on bad coefficient text.
  static ProblemSpec make(double a, double b, const std::string& k,
                          const std::string& r, const std::string& kappa,
                          const std::string& rho);

  /// Piecewise coefficient views of the whole interval.
  double K(double x) const { return x < 0 ? k(x) : kappa(x); }
  double R(double x) const { return x < 0 ? r(x) : rho(x); }
};

struct ValidationReport {
  bool ok = false;
  // Positivity margins: minimum sampled value of each coefficient over its
  // interval (meaningful only when the coefficient itself evaluated cleanly).
  double min_k = 0, min_r = 0, min_kappa = 0, min_rho = 0;
  std::vector<std::string> failures;
};

/// Samples every coefficient on a dense grid (>= 1000 points per interval),
/// checking interval sanity (a < 0 < b), domain problems and strict
/// positivity. Failures are reported, never thrown.
ValidationReport validate_problem(const ProblemSpec& p, int samples = 1000);

}  // namespace stiffspec
