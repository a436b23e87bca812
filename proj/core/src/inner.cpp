#include "stiffspec/inner.hpp"

#include "stiffspec/ivp.hpp"
#include "stiffspec/quadrature.hpp"

namespace stiffspec {

namespace {

double deriv_product(const RealFn& w, const FunctionTrace& A,
                     const FunctionTrace& B) {
  auto mesh = merged_mesh(A, B);
  return quad_mesh([&](double x) { return w(x) * A.deriv(x) * B.deriv(x); },
                   mesh);
}

}  // namespace

double inner_eps(const WeightedMetric& m, const ProblemSpec& p,
                 const TracePair& f, const TracePair& g) {
  double left = trace_product_integral([&p](double x) { return p.r(x); },
                                       f.left, g.left);
  double right = trace_product_integral([&p](double x) { return p.rho(x); },
                                        f.right, g.right);
  return left / m.epsilon + right;
}

double energy_inner_eps(const WeightedMetric& m, const ProblemSpec& p,
                        const TracePair& f, const TracePair& g) {
  double left = deriv_product([&p](double x) { return p.k(x); }, f.left, g.left);
  double right =
      deriv_product([&p](double x) { return p.kappa(x); }, f.right, g.right);
  return left + m.epsilon * right;
}

double inner_R(const ProblemSpec& p, const TracePair& f, const TracePair& g) {
  return trace_product_integral([&p](double x) { return p.r(x); }, f.left,
                                g.left) +
         trace_product_integral([&p](double x) { return p.rho(x); }, f.right,
                                g.right);
}

double inner_plain(const TracePair& f, const TracePair& g) {
  return trace_product_integral(nullptr, f.left, g.left) +
         trace_product_integral(nullptr, f.right, g.right);
}

}  // namespace stiffspec
