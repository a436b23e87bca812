#include "stiffspec/bvp.hpp"

#include <cmath>

#include "stiffspec/quadrature.hpp"

namespace stiffspec {

BvpSolution solve_constrained_bvp(const RealFn& p, const RealFn& q, double mu,
                                  const RealFn& f, double lo, double hi,
                                  BoundarySpec bc, const RealFn& ortho_weight,
                                  const FunctionTrace* ortho_to,
                                  const BvpOptions& opt) {
  using RK = BoundarySpec::RightKind;

  // Homogeneous basis from the left end; u1 spans the kernel candidates.
  FunctionTrace u1 = integrate_ivp(p, q, mu, lo, hi, 0.0, 1.0, opt.tol);
  const bool need_u2 = bc.left_value != 0.0;
  FunctionTrace u2;
  if (need_u2) u2 = integrate_ivp(p, q, mu, lo, hi, 1.0, 0.0, opt.tol);
  const bool forced = static_cast<bool>(f);
  FunctionTrace up;
  if (forced) up = integrate_ivp_forced(p, q, mu, lo, hi, 0.0, 0.0, f, opt.tol);

  // Constrained part dl*u2 + up and its right-end data.
  FunctionTrace part;
  if (need_u2 && forced)
    part = trace_combine(bc.left_value, u2, 1.0, up);
  else if (need_u2)
    part = trace_combine(bc.left_value, u2, 0.0, u2);
  else if (forced)
    part = up;
  else
    part = FunctionTrace::zero(lo, hi);

  auto right_data = [&](const FunctionTrace& t) {
    return bc.right_kind == RK::Value ? t.value(hi) : p(hi) * t.deriv(hi);
  };
  const double den = right_data(u1);
  const double mismatch = bc.right_value - right_data(part);

  BvpSolution out;
  double c;
  if (ortho_to == nullptr) {
    const double u1_scale = u1.sup_scale() + std::abs(p(hi) * u1.deriv(hi));
    if (std::abs(den) < opt.resonance_guard * u1_scale)
      throw NumericalError(
          "solve_constrained_bvp: homogeneous problem is (near-)resonant; "
          "the two-point solve is singular at this mu");
    c = mismatch / den;
  } else {
    out.resonant = true;
    // The right condition must already hold up to the solvability defect.
    double scale = std::abs(bc.right_value) + part.sup_scale() +
                   std::abs(right_data(part)) + 1e-30;
    out.solvability_residual = std::abs(mismatch) / scale;
    if (out.solvability_residual > opt.solvability_tol)
      throw NumericalError(
          "solve_constrained_bvp: solvability condition violated (residual " +
          std::to_string(out.solvability_residual) +
          "); upstream expansion coefficient is inconsistent");
    double num = trace_product_integral(ortho_weight, part, *ortho_to);
    double dend = trace_product_integral(ortho_weight, u1, *ortho_to);
    if (dend == 0.0)
      throw NumericalError("solve_constrained_bvp: degenerate deflation");
    c = -num / dend;
  }
  out.u = trace_combine(1.0, part, c, u1);
  return out;
}

double ode_residual(const RealFn& p, const RealFn& q, double mu,
                    const RealFn& f, const FunctionTrace& t) {
  auto rhs = [&](double x) {
    double v = -mu * q(x) * t.value(x);
    return f ? v + f(x) : v;
  };
  auto nodes = t.nodes();
  const double f0 = p(nodes.front()) * t.deriv(nodes.front());
  double flux_scale = std::abs(f0);
  double cumulative = 0.0, worst = 0.0;
  std::vector<double> cell(2);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    cell[0] = nodes[i];
    cell[1] = nodes[i + 1];
    cumulative += quad_mesh(rhs, cell);
    double flux = p(nodes[i + 1]) * t.deriv(nodes[i + 1]);
    flux_scale = std::max(flux_scale, std::abs(flux));
    worst = std::max(worst, std::abs(flux - f0 - cumulative));
  }
  return worst / (flux_scale + 1e-30);
}

}  // namespace stiffspec
