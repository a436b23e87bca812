#include "stiffspec/limit_spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "stiffspec/bvp.hpp"
#include "stiffspec/inner.hpp"
#include "stiffspec/quadrature.hpp"
#include "rootfind.hpp"
#include "zeros.hpp"

namespace stiffspec {

namespace {

constexpr double kShootTol = 1e-12;
constexpr double kRootTol = 1e-13;

struct SideProblem {
  RealFn p, q;       // rigidity, density
  double lo, hi;
  bool shoot_from_hi;  // integration direction for the determinant
  // Determinant reads either the value or the flux at the matching end.
  bool det_is_flux;
};

double determinant(const SideProblem& s, double mu) {
  if (s.shoot_from_hi) {
    auto end = integrate_ivp_endpoint(s.p, s.q, mu, s.hi, s.lo, 0.0, -1.0, kShootTol);
    return s.det_is_flux ? end.pu : end.u;
  }
  auto end = integrate_ivp_endpoint(s.p, s.q, mu, s.lo, s.hi, 0.0, 1.0, kShootTol);
  return s.det_is_flux ? end.pu : end.u;
}

FunctionTrace shoot_trace(const SideProblem& s, double mu, double tol = kShootTol) {
  return s.shoot_from_hi
             ? integrate_ivp(s.p, s.q, mu, s.hi, s.lo, 0.0, -1.0, tol)
             : integrate_ivp(s.p, s.q, mu, s.lo, s.hi, 0.0, 1.0, tol);
}

// All determinant roots in (0, mu_max] by scan + Brent, verified against the
// oscillation count of each refined eigenfunction; the scan step halves until
// the counts certify that nothing was skipped.
std::vector<double> sl_spectrum(const SideProblem& s, double mu_max) {
  if (!(mu_max > 0)) return {};
  // Scale of the spectrum from the Liouville length of the interval.
  double L = quad([&](double x) { return std::sqrt(s.q(x) / s.p(x)); }, s.lo, s.hi, 1e-10);
  double step = (M_PI * M_PI) / (4.0 * L * L);

  for (int attempt = 0; attempt < 6; ++attempt) {
    std::vector<double> grid;
    for (double mu = step * 1e-3; mu <= mu_max + 0.5 * step; mu += step)
      grid.push_back(mu);
    auto f = [&](double mu) { return determinant(s, mu); };
    std::vector<double> roots;
    for (const auto& br : detail::scan_grid(f, grid)) {
      double root = br.lo == br.hi ? br.lo
                                   : detail::brent(f, br.lo, br.hi, br.flo, br.fhi, kRootTol);
      if (root <= mu_max) roots.push_back(root);
    }
    detail::dedupe_roots(roots);

    bool certified = true;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      FunctionTrace t = shoot_trace(s, roots[i], 1e-10);
      if (detail::internal_sign_changes(t.values()) != static_cast<int>(i)) {
        certified = false;
        break;
      }
    }
    if (certified) return roots;
    step *= 0.5;
  }
  throw NumericalError("limit spectrum scan: oscillation counts failed to certify the root list");
}

SideProblem left_side(const ProblemSpec& p) {
  // y(a)=0 start, determinant is the interface flux (k y')(0).
  return {[&p](double x) { return p.k(x); },
          [&p](double x) { return p.r(x); },
          p.a, 0.0, /*shoot_from_hi=*/false, /*det_is_flux=*/true};
}

SideProblem right_side(const ProblemSpec& p) {
  // v(b)=0 start, determinant is the interface value v(0).
  return {[&p](double x) { return p.kappa(x); },
          [&p](double x) { return p.rho(x); },
          0.0, p.b, /*shoot_from_hi=*/true, /*det_is_flux=*/false};
}

FunctionTrace normalized(const ProblemSpec& p, const FunctionTrace& t,
                         const RealFn& weight, double sign_probe) {
  double n2 = trace_product_integral(weight, t, t);
  double s = 1.0 / std::sqrt(n2);
  if (sign_probe < 0) s = -s;
  return t.scaled(s);
}

}  // namespace

std::vector<double> left_free_spectrum(const ProblemSpec& p, double mu_max) {
  return sl_spectrum(left_side(p), mu_max);
}

std::vector<double> right_pinned_spectrum(const ProblemSpec& p, double mu_max) {
  return sl_spectrum(right_side(p), mu_max);
}

std::vector<double> right_pinned_first(const ProblemSpec& p, int n) {
  double L = quad([&p](double x) { return std::sqrt(p.rho(x) / p.kappa(x)); },
                  0.0, p.b, 1e-10);
  double cap = 2.0 * std::pow((n + 1) * M_PI / L, 2);
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto roots = right_pinned_spectrum(p, cap);
    if (static_cast<int>(roots.size()) >= n)
      return {roots.begin(), roots.begin() + n};
    cap *= 2.0;
  }
  throw NumericalError("right_pinned_first: window extension exhausted");
}

LimitSpectrum classify(const std::vector<double>& left_free,
                       const std::vector<double>& right_pinned,
                       double cluster_tol) {
  LimitSpectrum spec;
  std::size_t i = 0, j = 0;
  auto push_simple = [&spec](double mu, ModeKind kind) {
    LimitMode m;
    m.mu = mu;
    m.kind = kind;
    spec.modes.push_back(std::move(m));
  };
  while (i < left_free.size() || j < right_pinned.size()) {
    bool left_next = j >= right_pinned.size() ||
                     (i < left_free.size() && left_free[i] <= right_pinned[j]);
    if (i < left_free.size() && j < right_pinned.size() &&
        std::abs(left_free[i] - right_pinned[j]) <=
            cluster_tol * (1.0 + std::abs(left_free[i]))) {
      LimitMode m;
      m.mu = 0.5 * (left_free[i] + right_pinned[j]);
      m.kind = ModeKind::Double;
      spec.modes.push_back(m);
      spec.modes.push_back(std::move(m));  // double: two slots
      ++i;
      ++j;
    } else if (left_next) {
      push_simple(left_free[i++], ModeKind::SimpleLeft);
    } else {
      push_simple(right_pinned[j++], ModeKind::SimpleRight);
    }
  }
  return spec;
}

LimitMode limit_eigenfunction(const ProblemSpec& p, LimitMode mode) {
  auto kfn = [&p](double x) { return p.k(x); };
  auto rfn = [&p](double x) { return p.r(x); };
  auto kapfn = [&p](double x) { return p.kappa(x); };
  auto rhofn = [&p](double x) { return p.rho(x); };

  if (mode.kind == ModeKind::SimpleLeft || mode.kind == ModeKind::Double) {
    FunctionTrace raw = shoot_trace(left_side(p), mode.mu);
    mode.w = normalized(p, raw, rfn, raw.value(0.0));
  }
  if (mode.kind == ModeKind::SimpleRight || mode.kind == ModeKind::Double) {
    FunctionTrace raw = shoot_trace(right_side(p), mode.mu);
    mode.v = normalized(p, raw, rhofn, raw.deriv(0.0));
  }

  if (mode.kind == ModeKind::SimpleLeft) {
    // Unique interface-matched extension to the right interval.
    BoundarySpec bc;
    bc.left_value = mode.w->value(0.0);
    bc.right_kind = BoundarySpec::RightKind::Value;
    bc.right_value = 0.0;
    BvpSolution z = solve_constrained_bvp(kapfn, rhofn, mode.mu, nullptr, 0.0,
                                          p.b, bc);
    double flux0 = p.kappa(0.0) * z.u.deriv(0.0);
    double flux_scale = p.kappa(0.0) * (z.u.sup_scale() + std::abs(z.u.deriv(0.0)));
    mode.exact_mode = std::abs(flux0) <= 1e-10 * (flux_scale + 1e-30);
    mode.U = TracePair{*mode.w, std::move(z.u)};
  } else {
    mode.U = TracePair{FunctionTrace::zero(p.a, 0.0), *mode.v};
  }
  return mode;
}

LimitMode adjoined_vector(const ProblemSpec& p, LimitMode mode) {
  if (mode.kind != ModeKind::Double)
    throw std::invalid_argument("adjoined_vector: mode is not double");
  if (!mode.w || !mode.v) mode = limit_eigenfunction(p, std::move(mode));

  const double w0 = mode.w->value(0.0);
  const double dv0 = mode.v->deriv(0.0);
  if (std::abs(w0) < 1e-10 || std::abs(dv0) < 1e-10)
    throw NumericalError("adjoined_vector: degenerate interface data "
                         "(normalization preconditions violated)");
  const double kappa0 = p.kappa(0.0);
  const double omega = kappa0 * w0 * dv0;
  if (std::abs(omega) < 1e-10)
    throw NumericalError("adjoined_vector: vanishing interface coupling");
  mode.coupling = omega;

  // Left part: the eigenfunction scaled so the right-hand forced problem is
  // solvable: kappa(0) v'(0) * (s w)(0) = -int rho v^2 = -1, i.e. s = -1/omega.
  const double s = -1.0 / omega;
  FunctionTrace wstar = mode.w->scaled(s);

  // Right part: forced resonant problem, rho-orthogonal to v.
  auto kapfn = [&p](double x) { return p.kappa(x); };
  auto rhofn = [&p](double x) { return p.rho(x); };
  const FunctionTrace& v = *mode.v;
  RealFn forcing = [&p, &v](double x) { return -p.rho(x) * v.value(x); };
  BoundarySpec bc;
  bc.left_value = s * w0;
  bc.right_kind = BoundarySpec::RightKind::Value;
  bc.right_value = 0.0;
  BvpSolution sol =
      solve_constrained_bvp(kapfn, rhofn, mode.mu, forcing, 0.0, p.b, bc,
                            rhofn, &v);

  TracePair ustar{std::move(wstar), std::move(sol.u)};
  // Orthogonalize against U in the R-weighted product (U has zero left part,
  // so this only shifts the right part by a multiple of v).
  const TracePair& U = *mode.U;
  double c = inner_R(p, ustar, U) / inner_R(p, U, U);
  ustar.right = trace_combine(1.0, ustar.right, -c, U.right);
  mode.Ustar = std::move(ustar);
  return mode;
}

}  // namespace stiffspec
