#pragma once

#include <vector>

#include "stiffspec/inner.hpp"
#include "stiffspec/limit_spectrum.hpp"
#include "stiffspec/problem.hpp"
#include "stiffspec/trace.hpp"

namespace stiffspec {

/// One eigenvalue/eigenfunction of the transmission problem
///
///   (k u')' + eps^{-1} lambda r u = 0        on (a,0),
///   eps (kappa u')' + lambda rho u = 0       on (0,b),
///   u(-0) = u(+0),  (k u')(-0) = eps (kappa u')(+0),
///   u(a) = u(b) = 0.
///
/// All computations run in the rescaled spectral variable mu = lambda/eps,
/// which makes both equations eps-free; only the interface flux jump
/// carries eps.
struct EigenPair {
  int j = 0;           // 1-based index
  double epsilon = 0;
  double lambda = 0;
  double mu = 0;       // lambda / epsilon
  FunctionTrace left;  // on [a,0]; empty until eigenfunction() fills it
  FunctionTrace right; // on [0,b]

  TracePair trace() const { return {left, right}; }
};

/// Interface mismatch D(mu) of the two-sided shooting solutions; D(mu) = 0
/// exactly at mu = lambda/eps for an eigenvalue. D is smooth in mu with
/// simple sign-change roots.
double characteristic(const ProblemSpec& p, double eps, double mu,
                      double tol = 1e-12);

/// First `count` eigenvalues (values only; traces empty), strictly
/// increasing, refined to relative 1e-12 in mu. The scan window follows the
/// one-sided comparison bounds; bifurcating pairs clustered around double
/// limit eigenvalues are resolved by geometric probe ladders, and the final
/// indexing is certified against oscillation counts.
std::vector<EigenPair> eigenvalues(const ProblemSpec& p, double eps, int count);

/// Fills the normalized eigenfunction traces of a converged pair:
/// int_a^b R u^2 = 1 with u'(b) > 0.
EigenPair eigenfunction(const ProblemSpec& p, double eps, EigenPair pair);

/// Targeted solve: the `expected` roots of D nearest to mu_center within
/// +-radius (used for continuation across an epsilon grid without re-running
/// the global scan). Throws NumericalError if fewer roots are found.
std::vector<EigenPair> eigenvalues_near(const ProblemSpec& p, double eps,
                                        double mu_center, int expected,
                                        double radius);

/// First `count` positive roots omega of the constant-coefficient interface
/// equation  cos(omega a) sin(omega b) = eps sin(omega a) cos(omega b),
/// refined to ~1e-14. Closed-form comparison oracle; the eigenvalue ratios of
/// the constant-coefficient problem are mu = omega^2.
std::vector<double> constant_case_roots(double a, double b, double eps,
                                        int count);

}  // namespace stiffspec
