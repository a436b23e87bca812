#pragma once

#include <optional>
#include <vector>

#include "stiffspec/problem.hpp"
#include "stiffspec/trace.hpp"

namespace stiffspec {

/// Classification of a point of the limit spectrum.
///
/// The limit problem decouples into two one-sided problems: the left
/// (stiff-heavy) interval with a free interface condition u'(0)=0, and the
/// right (flexible-light) interval pinned at both ends. A limit eigenvalue
/// belonging to both one-sided spectra is a double eigenvalue of the (no
/// longer self-adjoint) limit operator and carries a two-dimensional root
/// space spanned by an eigenfunction and an adjoined function.
enum class ModeKind { SimpleLeft, SimpleRight, Double };

struct LimitMode {
  double mu = 0.0;
  ModeKind kind = ModeKind::SimpleLeft;

  /// Left eigenfunction on [a,0] (int r w^2 = 1, w(0) > 0): SimpleLeft/Double.
  std::optional<FunctionTrace> w;
  /// Right eigenfunction on [0,b] (int rho v^2 = 1, v'(0) > 0):
  /// SimpleRight/Double.
  std::optional<FunctionTrace> v;

  /// Limit eigenfunction: (w, z) for SimpleLeft, (0, v) otherwise.
  std::optional<TracePair> U;
  /// Adjoined function spanning the Jordan cell (Double only); scaled by the
  /// interface solvability identity, then made (U,Ustar)_R = 0.
  std::optional<TracePair> Ustar;
  /// Interface coupling omega = (kappa w v')(0) > 0 (Double only).
  std::optional<double> coupling;

  /// SimpleLeft only: the extension z has zero interface flux, so (mu, U) is
  /// an eigenpair of the perturbed problem for every epsilon and the
  /// eigenvalue ratio does not move at all.
  bool exact_mode = false;
};

/// The limit spectrum in nondecreasing order with multiplicity expanded:
/// a Double mode occupies two consecutive slots (same data in both).
struct LimitSpectrum {
  std::vector<LimitMode> modes;
};

/// Eigenvalues mu <= mu_max of (k y')' + mu r y = 0 on (a,0),
/// y(a) = 0, y'(0) = 0. Shooting determinant (k y')(0) with scan + Brent,
/// oscillation-verified, relative tolerance 1e-12.
std::vector<double> left_free_spectrum(const ProblemSpec& p, double mu_max);

/// Eigenvalues mu <= mu_max of (kappa v')' + mu rho v = 0 on (0,b),
/// v(0) = v(b) = 0, same method (determinant v(0) shooting from b).
std::vector<double> right_pinned_spectrum(const ProblemSpec& p, double mu_max);

/// First n right-pinned eigenvalues (extends the window as needed).
std::vector<double> right_pinned_first(const ProblemSpec& p, int n);

/// Merges the two one-sided spectra; values agreeing to
/// cluster_tol*(1+mu) become Double modes.
LimitSpectrum classify(const std::vector<double>& left_free,
                       const std::vector<double>& right_pinned,
                       double cluster_tol = 1e-8);

/// Fills w/v and the limit eigenfunction U. For SimpleLeft the right part is
/// the unique interface-matched extension (throws NumericalError when mu is
/// too close to the right-pinned spectrum for the extension to be solvable).
LimitMode limit_eigenfunction(const ProblemSpec& p, LimitMode mode);

/// Fills Ustar and coupling for a Double mode.
LimitMode adjoined_vector(const ProblemSpec& p, LimitMode mode);

}  // namespace stiffspec
