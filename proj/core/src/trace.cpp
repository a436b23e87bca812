#include "stiffspec/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stiffspec {

FunctionTrace FunctionTrace::from_samples(std::vector<double> nodes,
                                          std::vector<double> values,
                                          std::vector<double> derivs) {
  if (nodes.size() < 2 || nodes.size() != values.size() || nodes.size() != derivs.size())
    throw std::invalid_argument("trace: need >= 2 consistent samples");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1]))
      throw std::invalid_argument("trace: nodes must be strictly increasing");
  FunctionTrace t;
  t.xs_ = std::move(nodes);
  t.u_ = std::move(values);
  t.du_ = std::move(derivs);
  return t;
}

FunctionTrace FunctionTrace::zero(double lo, double hi) {
  return from_samples({lo, 0.5 * (lo + hi), hi}, {0, 0, 0}, {0, 0, 0});
}

std::size_t FunctionTrace::segment(double x) const {
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs_.begin());
  if (i == 0) return 0;
  if (i >= xs_.size()) return xs_.size() - 2;
  return i - 1;
}

double FunctionTrace::value(double x) const {
  const double tol = 1e-12 * (1.0 + std::abs(xs_.front()) + std::abs(xs_.back()));
  if (x < xs_.front() - tol || x > xs_.back() + tol)
    throw std::domain_error("trace: evaluation outside interval");
  std::size_t i = segment(x);
  double h = xs_[i + 1] - xs_[i];
  double t = (x - xs_[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  double h00 = 2 * t3 - 3 * t2 + 1;
  double h10 = t3 - 2 * t2 + t;
  double h01 = -2 * t3 + 3 * t2;
  double h11 = t3 - t2;
  return h00 * u_[i] + h10 * h * du_[i] + h01 * u_[i + 1] + h11 * h * du_[i + 1];
}

double FunctionTrace::deriv(double x) const {
  const double tol = 1e-12 * (1.0 + std::abs(xs_.front()) + std::abs(xs_.back()));
  if (x < xs_.front() - tol || x > xs_.back() + tol)
    throw std::domain_error("trace: evaluation outside interval");
  std::size_t i = segment(x);
  double h = xs_[i + 1] - xs_[i];
  double t = (x - xs_[i]) / h;
  double t2 = t * t;
  double d00 = (6 * t2 - 6 * t) / h;
  double d10 = 3 * t2 - 4 * t + 1;
  double d01 = (-6 * t2 + 6 * t) / h;
  double d11 = 3 * t2 - 2 * t;
  return d00 * u_[i] + d10 * du_[i] + d01 * u_[i + 1] + d11 * du_[i + 1];
}

double FunctionTrace::sup_scale() const {
  double s = 0;
  for (double v : u_) s = std::max(s, std::abs(v));
  return s;
}

FunctionTrace FunctionTrace::scaled(double factor) const {
  FunctionTrace t(*this);
  for (double& v : t.u_) v *= factor;
  for (double& v : t.du_) v *= factor;
  return t;
}

FunctionTrace trace_combine(double alpha, const FunctionTrace& t1, double beta,
                            const FunctionTrace& t2) {
  const double tol = 1e-12 * (1 + std::abs(t1.lo()) + std::abs(t1.hi()));
  if (std::abs(t1.lo() - t2.lo()) > tol || std::abs(t1.hi() - t2.hi()) > tol)
    throw std::invalid_argument("trace_combine: interval mismatch");

  std::vector<double> xs;
  xs.reserve(t1.nodes().size() + t2.nodes().size());
  std::merge(t1.nodes().begin(), t1.nodes().end(), t2.nodes().begin(),
             t2.nodes().end(), std::back_inserter(xs));
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [tol](double a, double b) { return std::abs(a - b) <= tol; }),
           xs.end());
  // Evaluate t2 on t1's parametrization of shared endpoints.
  std::vector<double> u(xs.size()), du(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double x = std::clamp(xs[i], std::max(t1.lo(), t2.lo()), std::min(t1.hi(), t2.hi()));
    u[i] = alpha * t1.value(x) + beta * t2.value(x);
    du[i] = alpha * t1.deriv(x) + beta * t2.deriv(x);
  }
  return FunctionTrace::from_samples(std::move(xs), std::move(u), std::move(du));
}

}  // namespace stiffspec
