#pragma once

#include <span>
#include <vector>

namespace stiffspec {

/// A numerically represented function on one subinterval: sample points with
/// values and first derivatives, evaluated between nodes by cubic Hermite
/// interpolation (C1, exact at the nodes).
///
/// Nodes are strictly increasing with nodes.front()==lo(), nodes.back()==hi().
/// Immutable after construction.
class FunctionTrace {
 public:
  FunctionTrace() = default;

  static FunctionTrace from_samples(std::vector<double> nodes,
                                    std::vector<double> values,
                                    std::vector<double> derivs);

  /// The zero function represented on [lo, hi].
  static FunctionTrace zero(double lo, double hi);

  double lo() const { return xs_.front(); }
  double hi() const { return xs_.back(); }
  bool empty() const { return xs_.empty(); }

  double value(double x) const;
  double deriv(double x) const;

  std::span<const double> nodes() const { return xs_; }
  std::span<const double> values() const { return u_; }
  std::span<const double> derivs() const { return du_; }

  /// Max of |value| over the nodes; a cheap scale for tolerances.
  double sup_scale() const;

  /// The trace scaled by a constant factor.
  FunctionTrace scaled(double factor) const;

 private:
  std::size_t segment(double x) const;
  std::vector<double> xs_, u_, du_;
};

/// Pointwise alpha*t1 + beta*t2 on the merged node set. Intervals must agree
/// to 1e-12; throws std::invalid_argument otherwise.
FunctionTrace trace_combine(double alpha, const FunctionTrace& t1, double beta,
                            const FunctionTrace& t2);

/// A function on (a,0) u (0,b) stored as its two one-sided traces.
struct TracePair {
  FunctionTrace left;   // on [a, 0]
  FunctionTrace right;  // on [0, b]

  double value(double x) const { return x < 0 ? left.value(x) : right.value(x); }
  double deriv(double x) const { return x < 0 ? left.deriv(x) : right.deriv(x); }
};

}  // namespace stiffspec
