#include "stiffspec/expansion.hpp"

#include <cmath>

#include "stiffspec/quadrature.hpp"

namespace stiffspec {

namespace {

int clamp_order(int n) {
  if (n < 0) n = 0;
  return std::min(n, kMaxExpansionOrder);
}

// -r(x) * sum_j coeff[j] * traces[idx[j]](x), evaluated through interpolants.
RealFn weighted_sum_forcing(const RealFn& weight,
                            std::vector<const FunctionTrace*> traces,
                            std::vector<double> coeffs) {
  return [weight, traces = std::move(traces),
          coeffs = std::move(coeffs)](double x) {
    double s = 0;
    for (std::size_t i = 0; i < traces.size(); ++i)
      s += coeffs[i] * traces[i]->value(x);
    return -weight(x) * s;
  };
}

LimitMode with_eigenfunctions(const ProblemSpec& p, const LimitMode& mode) {
  if (mode.U) return mode;
  return limit_eigenfunction(p, mode);
}

}  // namespace

double ExpansionSeries::mu_series(double eps, int upto) const {
  if (upto < 0 || upto > order) upto = order;
  double s = mode.mu;
  for (int m = 1; m <= upto && m <= static_cast<int>(nu.size()); ++m)
    s += std::pow(eps, power(m)) * nu[m - 1];
  return s;
}

ExpansionSeries expand_simple_left(const ProblemSpec& p, const LimitMode& mode_in,
                                   int n, const ExpandOptions& opt) {
  if (mode_in.kind != ModeKind::SimpleLeft)
    throw std::invalid_argument("expand_simple_left: wrong mode kind");
  n = clamp_order(n);
  LimitMode mode = with_eigenfunctions(p, mode_in);

  auto kfn = [&p](double x) { return p.k(x); };
  auto rfn = [&p](double x) { return p.r(x); };
  auto kapfn = [&p](double x) { return p.kappa(x); };
  auto rhofn = [&p](double x) { return p.rho(x); };
  const double mu = mode.mu;
  const double kappa0 = p.kappa(0.0);

  ExpansionSeries s;
  s.mode = mode;
  s.branch = Branch::Single;
  s.k0 = p.k(0.0);
  s.kappa0 = kappa0;
  // No reallocation: references and forcing pointers into these vectors stay
  // valid across the recurrence.
  s.left_coeffs.reserve(n + 1);
  s.right_coeffs.reserve(n + 1);
  s.left_coeffs.push_back(*mode.w);          // y_0
  s.right_coeffs.push_back(mode.U->right);   // z_0

  const FunctionTrace& y0 = s.left_coeffs[0];
  const double y00 = y0.value(0.0);

  for (int m = 1; m <= n; ++m) {
    const FunctionTrace& zprev = s.right_coeffs[m - 1];
    double flux = kappa0 * zprev.deriv(0.0);
    if (m == 1) {
      double flux_scale =
          kappa0 * (zprev.sup_scale() + std::abs(zprev.deriv(0.0))) + 1e-30;
      if (std::abs(flux) <= 1e-10 * flux_scale) {
        // The zero-order pair already satisfies the interface condition for
        // every eps; the construction is interrupted and the eigenvalue is
        // exactly eps*mu.
        s.exact_flag = true;
        s.order = 0;
        return s;
      }
    }
    double nu_m = -flux * y00;
    s.nu.push_back(nu_m);

    // Left problem: resonant, flux datum at the interface, r-orthogonal to y0.
    std::vector<const FunctionTrace*> lt;
    std::vector<double> lc;
    for (int j = 1; j <= m; ++j) {
      lt.push_back(&s.left_coeffs[m - j]);
      lc.push_back(s.nu[j - 1]);
    }
    BoundarySpec lbc;
    lbc.left_value = 0.0;
    lbc.right_kind = BoundarySpec::RightKind::Flux;
    lbc.right_value = flux;
    BvpOptions bopt;
    bopt.tol = opt.tol;
    BvpSolution ym =
        solve_constrained_bvp(kfn, rfn, mu, weighted_sum_forcing(rfn, lt, lc),
                              p.a, 0.0, lbc, rfn, &y0, bopt);
    s.left_coeffs.push_back(std::move(ym.u));

    // Right problem: non-resonant extension with matched interface value.
    std::vector<const FunctionTrace*> rt;
    std::vector<double> rc;
    for (int j = 1; j <= m; ++j) {
      rt.push_back(&s.right_coeffs[m - j]);
      rc.push_back(s.nu[j - 1]);
    }
    BoundarySpec rbc;
    rbc.left_value = s.left_coeffs[m].value(0.0);
    rbc.right_kind = BoundarySpec::RightKind::Value;
    rbc.right_value = 0.0;
    BvpSolution zm = solve_constrained_bvp(
        kapfn, rhofn, mu, weighted_sum_forcing(rhofn, rt, rc), 0.0, p.b, rbc,
        nullptr, nullptr, bopt);
    s.right_coeffs.push_back(std::move(zm.u));
  }
  s.order = n;
  return s;
}

ExpansionSeries expand_simple_right(const ProblemSpec& p,
                                    const LimitMode& mode_in, int n,
                                    const ExpandOptions& opt) {
  if (mode_in.kind != ModeKind::SimpleRight)
    throw std::invalid_argument("expand_simple_right: wrong mode kind");
  n = clamp_order(n);
  LimitMode mode = with_eigenfunctions(p, mode_in);

  auto kfn = [&p](double x) { return p.k(x); };
  auto rfn = [&p](double x) { return p.r(x); };
  auto kapfn = [&p](double x) { return p.kappa(x); };
  auto rhofn = [&p](double x) { return p.rho(x); };
  const double mu = mode.mu;
  const double kappa0 = p.kappa(0.0);

  ExpansionSeries s;
  s.mode = mode;
  s.branch = Branch::Single;
  s.k0 = p.k(0.0);
  s.kappa0 = kappa0;
  s.left_coeffs.reserve(n + 1);
  s.right_coeffs.reserve(n + 1);
  s.left_coeffs.push_back(FunctionTrace::zero(p.a, 0.0));  // y_0 = 0
  s.right_coeffs.push_back(*mode.v);                       // z_0

  const FunctionTrace& z0 = s.right_coeffs[0];
  const double z0_flux = kappa0 * z0.deriv(0.0);

  for (int m = 1; m <= n; ++m) {
    // Left problem first: non-resonant (mu is not a left-interval
    // eigenvalue), Dirichlet at a, flux datum at the interface.
    std::vector<const FunctionTrace*> lt;
    std::vector<double> lc;
    for (int j = 1; j <= m - 1; ++j) {
      lt.push_back(&s.left_coeffs[m - j]);
      lc.push_back(s.nu[j - 1]);
    }
    BoundarySpec lbc;
    lbc.left_value = 0.0;
    lbc.right_kind = BoundarySpec::RightKind::Flux;
    lbc.right_value = kappa0 * s.right_coeffs[m - 1].deriv(0.0);
    BvpOptions bopt;
    bopt.tol = opt.tol;
    RealFn lf = lt.empty() ? RealFn(nullptr) : weighted_sum_forcing(rfn, lt, lc);
    BvpSolution ym =
        solve_constrained_bvp(kfn, rfn, mu, lf, p.a, 0.0, lbc, nullptr, nullptr,
                              bopt);
    s.left_coeffs.push_back(std::move(ym.u));

    double nu_m = -z0_flux * s.left_coeffs[m].value(0.0);
    s.nu.push_back(nu_m);

    // Right problem: resonant, rho-orthogonal to z0.
    std::vector<const FunctionTrace*> rt;
    std::vector<double> rc;
    for (int j = 1; j <= m; ++j) {
      rt.push_back(&s.right_coeffs[m - j]);
      rc.push_back(s.nu[j - 1]);
    }
    BoundarySpec rbc;
    rbc.left_value = s.left_coeffs[m].value(0.0);
    rbc.right_kind = BoundarySpec::RightKind::Value;
    rbc.right_value = 0.0;
    BvpSolution zm = solve_constrained_bvp(
        kapfn, rhofn, mu, weighted_sum_forcing(rhofn, rt, rc), 0.0, p.b, rbc,
        rhofn, &z0, bopt);
    s.right_coeffs.push_back(std::move(zm.u));
  }
  s.order = n;
  return s;
}

namespace {

// One half-power branch of a double mode: seed_sign = +1 gives nu_1 = +omega
// with leading left term -sqrt(eps) w, seed_sign = -1 the mirror branch.
// The recursion is run one step past `n` so that the last stored right
// coefficient carries its full eigen-direction component.
ExpansionSeries double_branch(const ProblemSpec& p, const LimitMode& mode,
                              int n, double seed_sign, double omega,
                              const ExpandOptions& opt) {
  auto kfn = [&p](double x) { return p.k(x); };
  auto rfn = [&p](double x) { return p.r(x); };
  auto kapfn = [&p](double x) { return p.kappa(x); };
  auto rhofn = [&p](double x) { return p.rho(x); };
  const double mu = mode.mu;
  const double kappa0 = p.kappa(0.0);
  const FunctionTrace& w = *mode.w;
  const FunctionTrace& v = *mode.v;
  const double s_ = seed_sign;

  ExpansionSeries out;
  out.mode = mode;
  out.branch = s_ > 0 ? Branch::Plus : Branch::Minus;
  out.k0 = p.k(0.0);
  out.kappa0 = kappa0;

  std::vector<double> nu;                 // nu_1..nu_t
  std::vector<FunctionTrace> vfull;       // v_0..; full coefficients
  std::vector<FunctionTrace> wfull;       // w_0(=0), w_1..
  std::vector<double> alpha;              // alpha_0..; rho-components of vfull

  nu.reserve(n + 2);
  vfull.reserve(n + 2);
  wfull.reserve(n + 3);
  alpha.reserve(n + 2);

  double nu1 = s_ * omega;
  if (opt.nu1_override) nu1 = s_ * *opt.nu1_override;
  nu.push_back(nu1);
  vfull.push_back(v);
  alpha.push_back(1.0);
  wfull.push_back(FunctionTrace::zero(p.a, 0.0));
  wfull.push_back(w.scaled(-s_));

  BvpOptions bopt;
  bopt.tol = opt.tol;

  const int steps = n + 1;  // one step of lookahead completes v_n
  for (int t = 2; t <= steps; ++t) {
    // Right problem for v_{t-1}: resonant, value-matched to w_{t-1}(0).
    std::vector<const FunctionTrace*> rt;
    std::vector<double> rc;
    for (int j = 1; j <= t - 1; ++j) {
      rt.push_back(&vfull[t - 1 - j]);
      rc.push_back(nu[j - 1]);
    }
    BoundarySpec rbc;
    rbc.left_value = wfull[t - 1].value(0.0);
    rbc.right_kind = BoundarySpec::RightKind::Value;
    rbc.right_value = 0.0;
    BvpSolution V = solve_constrained_bvp(
        kapfn, rhofn, mu, weighted_sum_forcing(rhofn, rt, rc), 0.0, p.b, rbc,
        rhofn, &v, bopt);

    // Left problem for W_t: resonant, flux-matched to (kappa v_{t-2}')(0).
    std::vector<const FunctionTrace*> lt;
    std::vector<double> lc;
    for (int j = 1; j <= t - 1; ++j) {
      lt.push_back(&wfull[t - j]);
      lc.push_back(nu[j - 1]);
    }
    BoundarySpec lbc;
    lbc.left_value = 0.0;
    lbc.right_kind = BoundarySpec::RightKind::Flux;
    lbc.right_value = kappa0 * vfull[t - 2].deriv(0.0);
    BvpSolution W = solve_constrained_bvp(
        kfn, rfn, mu, weighted_sum_forcing(rfn, lt, lc), p.a, 0.0, lbc, rfn, &w,
        bopt);

    // Interface data of the orthogonal parts fix nu_t and the shared
    // eigen-direction coefficients alpha_{t-1} = s * beta_{t-1}.
    double Q = kappa0 * w.value(0.0) * V.u.deriv(0.0);
    double P = kappa0 * W.u.value(0.0) * v.deriv(0.0);
    double nu_t = 0.5 * (s_ * Q - P);
    nu.push_back(nu_t);

    double corr = 0.0;
    for (int j = 2; j <= t - 1; ++j) corr += nu[j - 1] * alpha[t - j];
    double alpha_t1 = -s_ * (P + nu_t + corr) / (2.0 * omega);
    double beta_t1 = s_ * alpha_t1;

    alpha.push_back(alpha_t1);
    vfull.push_back(trace_combine(1.0, V.u, alpha_t1, v));
    wfull.push_back(trace_combine(1.0, W.u, beta_t1, w));
  }

  out.order = n;
  out.nu.assign(nu.begin(), nu.begin() + n);
  out.left_coeffs.assign(wfull.begin(), wfull.begin() + n + 1);
  out.right_coeffs.assign(vfull.begin(), vfull.begin() + n + 1);
  return out;
}

}  // namespace

std::pair<ExpansionSeries, ExpansionSeries> expand_double(
    const ProblemSpec& p, const LimitMode& mode_in, int n,
    const ExpandOptions& opt) {
  if (mode_in.kind != ModeKind::Double)
    throw std::invalid_argument("expand_double: wrong mode kind");
  n = clamp_order(n);
  if (n < 1) n = 1;
  LimitMode mode = with_eigenfunctions(p, mode_in);

  double omega;
  if (mode.coupling) {
    omega = *mode.coupling;
  } else {
    omega = p.kappa(0.0) * mode.w->value(0.0) * mode.v->deriv(0.0);
    mode.coupling = omega;
  }
  if (std::abs(omega) < 1e-10)
    throw NumericalError("expand_double: degenerate interface coupling");

  return {double_branch(p, mode, n, +1.0, omega, opt),
          double_branch(p, mode, n, -1.0, omega, opt)};
}

PartialSum partial_sum(const ExpansionSeries& series, double eps, int order) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("partial_sum: eps must be in (0,1]");
  if (order < 0 || order > series.order) order = series.order;

  PartialSum ps;
  ps.epsilon = eps;
  ps.order = order;
  ps.Lambda = eps * series.mu_series(eps, order);
  ps.source = std::make_shared<ExpansionSeries>(series);

  FunctionTrace uleft = series.left_coeffs[0];
  FunctionTrace uright = series.right_coeffs[0];
  for (int m = 1; m <= order; ++m) {
    double c = std::pow(eps, series.power(m));
    uleft = trace_combine(1.0, uleft, c, series.left_coeffs[m]);
    uright = trace_combine(1.0, uright, c, series.right_coeffs[m]);
  }

  ps.beta_resid = series.k0 * uleft.deriv(0.0) -
                  eps * series.kappa0 * uright.deriv(0.0);

  // Flux corrector: the quadratic bubble phi(x) = x(x/a - 1) vanishes at both
  // left-interval ends and has phi'(0) = -1, so adding (beta/k(0)) phi zeroes
  // the interface flux jump without touching the boundary or continuity
  // conditions. A quadratic is represented exactly by the cubic interpolant.
  const double a = uleft.lo();
  std::vector<double> xs(uleft.nodes().begin(), uleft.nodes().end());
  std::vector<double> pv(xs.size()), pd(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    pv[i] = xs[i] * (xs[i] / a - 1.0);
    pd[i] = 2.0 * xs[i] / a - 1.0;
  }
  FunctionTrace phi = FunctionTrace::from_samples(std::move(xs), std::move(pv),
                                                  std::move(pd));
  FunctionTrace vleft =
      trace_combine(1.0, uleft, ps.beta_resid / series.k0, phi);

  ps.U = TracePair{std::move(uleft), uright};
  ps.V = TracePair{std::move(vleft), std::move(uright)};
  return ps;
}

}  // namespace stiffspec
