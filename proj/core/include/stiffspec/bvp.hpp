#pragma once

#include <optional>

#include "stiffspec/ivp.hpp"
#include "stiffspec/trace.hpp"

namespace stiffspec {

/// Boundary data for the two-point problems of the recurrent constructions:
/// a Dirichlet value at the left end and either a Dirichlet value or a flux
/// value (p u')(hi) at the right end.
struct BoundarySpec {
  enum class RightKind { Value, Flux };
  double left_value = 0.0;
  RightKind right_kind = RightKind::Value;
  double right_value = 0.0;
};

struct BvpOptions {
  double tol = 1e-12;              // integrator tolerance for the pieces
  double solvability_tol = 1e-8;   // relative, resonant case
  double resonance_guard = 1e-10;  // relative, non-resonant case
};

struct BvpSolution {
  FunctionTrace u;
  /// Relative mismatch of the right boundary condition left over after the
  /// Fredholm-constrained construction (resonant case only; ~integrator
  /// accuracy when the forcing satisfies the solvability condition).
  double solvability_residual = 0.0;
  bool resonant = false;
};

/// Solves (p u')' + mu q u = f on [lo, hi] with the given boundary data by
/// variation of parameters from two homogeneous IVP solutions plus one forced
/// integration.
///
/// Non-resonant mode (ortho_to == nullptr): the free constant is fixed by the
/// right boundary condition; throws NumericalError when mu sits too close to
/// an eigenvalue of the homogeneous problem.
///
/// Resonant mode (ortho_to != nullptr): mu is an eigenvalue of the
/// homogeneous problem, the right boundary condition holds automatically when
/// the forcing satisfies the solvability condition (checked; violations above
/// solvability_tol throw, signalling an upstream expansion-coefficient
/// error), and the free multiple of the eigenfunction is removed by the
/// constraint  integral( ortho_weight * u * ortho_to ) = 0.
BvpSolution solve_constrained_bvp(const RealFn& p, const RealFn& q, double mu,
                                  const RealFn& f, double lo, double hi,
                                  BoundarySpec bc,
                                  const RealFn& ortho_weight = nullptr,
                                  const FunctionTrace* ortho_to = nullptr,
                                  const BvpOptions& opt = {});

/// Integral-form defect of a trace against (p u')' + mu q u = f: compares the
/// flux increment p u'|_{x0}^{x} with the integral of (f - mu q u) cumulatively
/// over the trace mesh and returns the largest mismatch relative to the
/// natural flux scale. Derivative-free; used by residual invariants.
double ode_residual(const RealFn& p, const RealFn& q, double mu,
                    const RealFn& f, const FunctionTrace& t);

}  // namespace stiffspec
