#pragma once

#include <functional>
#include <stdexcept>

#include "stiffspec/trace.hpp"

namespace stiffspec {

/// Thrown when an integration or root search breaks down (step-size
/// underflow, exhausted windows, degenerate matching, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using RealFn = std::function<double(double)>;

/// Endpoint state of the first-order system (u, p u').
struct IvpEnd {
  double u;
  double pu;  // flux p(x) u'(x)
};

/// Solves (p(x) u')' + mu q(x) u = f(x) as the system u' = v/p, v' = f - mu q u
/// with an adaptive Dormand-Prince 5(4) pair. Integration may run in either
/// direction (from > to is allowed). Local error is controlled at `tol`
/// relative to the running solution scale; tol must lie in [1e-14, 1e-6].
///
/// The returned trace stores (x, u, u') at every accepted step, always ordered
/// left to right.
FunctionTrace integrate_ivp(const RealFn& p, const RealFn& q, double mu,
                            double from, double to, double u0, double pu0,
                            double tol = 1e-11);

FunctionTrace integrate_ivp_forced(const RealFn& p, const RealFn& q, double mu,
                                   double from, double to, double u0,
                                   double pu0, const RealFn& f,
                                   double tol = 1e-11);

/// Forcing given as a trace (evaluated through its interpolant).
FunctionTrace integrate_ivp_forced(const RealFn& p, const RealFn& q, double mu,
                                   double from, double to, double u0,
                                   double pu0, const FunctionTrace& f,
                                   double tol = 1e-11);

/// Same integration without recording the path; returns the state at `to`.
/// Used heavily by eigenvalue scans.
IvpEnd integrate_ivp_endpoint(const RealFn& p, const RealFn& q, double mu,
                              double from, double to, double u0, double pu0,
                              double tol = 1e-11);

}  // namespace stiffspec
