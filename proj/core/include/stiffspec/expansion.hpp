#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "stiffspec/bvp.hpp"
#include "stiffspec/limit_spectrum.hpp"
#include "stiffspec/problem.hpp"

namespace stiffspec {

enum class Branch { Single, Plus, Minus };

/// Truncated eigenvalue/eigenfunction series around one limit mode.
///
/// Simple modes expand in integer powers:
///   lambda/eps ~ mu + eps nu_1 + ... + eps^n nu_n,
///   u ~ sum eps^m (y_m | z_m).
/// Double modes expand in half powers, one branch per sign of the leading
/// corrector:
///   lambda/eps ~ mu + sqrt(eps) nu_1 + ... + eps^{n/2} nu_n,
///   u ~ sum eps^{m/2} (w_m | v_m),   w_0 = 0.
///
/// Coefficient traces are stored with uniform indexing 0..order in
/// left_coeffs/right_coeffs (left_coeffs[0] is the zero trace in the double
/// and simple-right cases).
struct ExpansionSeries {
  LimitMode mode;
  Branch branch = Branch::Single;
  int order = 0;
  std::vector<double> nu;                   // nu_1..nu_order
  std::vector<FunctionTrace> left_coeffs;   // index m = 0..order
  std::vector<FunctionTrace> right_coeffs;  // index m = 0..order
  bool exact_flag = false;
  double k0 = 1.0;      // k(0), fixed at build time for the flux corrector
  double kappa0 = 1.0;  // kappa(0)

  /// Exponent of eps carried by the m-th term (m, or m/2 on a double branch).
  double power(int m) const {
    return branch == Branch::Single ? static_cast<double>(m) : 0.5 * m;
  }
  /// mu + sum_m nu_m eps^power(m), truncated at `upto` (default: full order).
  double mu_series(double eps, int upto = -1) const;
};

/// Hard cap on the expansion order; beyond it the eps^{n/2} terms sink below
/// integrator noise at desk-scale eps.
inline constexpr int kMaxExpansionOrder = 6;

struct ExpandOptions {
  double tol = 1e-12;  // integrator tolerance for the recurrent solves
  /// Fault-injection override of the leading corrector nu_1 (plus branch);
  /// a wrong value trips the downstream solvability checks.
  std::optional<double> nu1_override;
};

/// Series around a simple left-interval mode; the interface-flux recursion
/// stops early with exact_flag when the zero-order extension already has zero
/// interface flux (the eigenvalue then does not move with eps at all).
ExpansionSeries expand_simple_left(const ProblemSpec& p, const LimitMode& mode,
                                   int n, const ExpandOptions& opt = {});

/// Series around a simple right-interval mode (zero-order left part is 0).
ExpansionSeries expand_simple_right(const ProblemSpec& p, const LimitMode& mode,
                                    int n, const ExpandOptions& opt = {});

/// The two half-power branches around a double mode, built independently
/// (the +/- symmetry of the coefficients is a measurable consequence, not an
/// input).
std::pair<ExpansionSeries, ExpansionSeries> expand_double(
    const ProblemSpec& p, const LimitMode& mode, int n,
    const ExpandOptions& opt = {});

/// A series evaluated at a concrete eps: the eigenvalue partial sum, the raw
/// eigenfunction partial sum U, and the flux-corrected V = U + beta*phi/k(0)
/// that satisfies the perturbed interface condition exactly (phi is the
/// left-interval bubble x(x/a-1), extended by zero).
struct PartialSum {
  double epsilon = 0;
  int order = 0;
  double Lambda = 0;     // eps * mu_series(eps)
  TracePair U;
  TracePair V;
  double beta_resid = 0; // (k U')(-0) - eps (kappa U')(+0)
  std::shared_ptr<const ExpansionSeries> source;
};

PartialSum partial_sum(const ExpansionSeries& series, double eps,
                       int order = -1);

}  // namespace stiffspec
