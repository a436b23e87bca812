#include "stiffspec/transmission.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stiffspec/ivp.hpp"
#include "stiffspec/quadrature.hpp"
#include "rootfind.hpp"
#include "zeros.hpp"

namespace stiffspec {

namespace {

constexpr double kRefineTol = 1e-13;  // relative, on mu

struct ShootEnds {
  double yl0, kyl0;  // left solution and flux at the interface
  double zr0, kzr0;  // right solution and flux at the interface
};

ShootEnds shoot_both(const ProblemSpec& p, double mu, double tol) {
  auto kfn = [&p](double x) { return p.k(x); };
  auto rfn = [&p](double x) { return p.r(x); };
  auto kapfn = [&p](double x) { return p.kappa(x); };
  auto rhofn = [&p](double x) { return p.rho(x); };
  IvpEnd l = integrate_ivp_endpoint(kfn, rfn, mu, p.a, 0.0, 0.0, 1.0, tol);
  IvpEnd r = integrate_ivp_endpoint(kapfn, rhofn, mu, p.b, 0.0, 0.0, -1.0, tol);
  return {l.u, l.pu, r.u, r.pu};
}

double mismatch(const ShootEnds& e, double eps) {
  return e.kyl0 * e.zr0 - eps * e.kzr0 * e.yl0;
}

// Sampled extrema of the piecewise coefficients, for the one-sided bounds.
void coefficient_extrema(const ProblemSpec& p, double& k_min, double& r_max) {
  k_min = std::numeric_limits<double>::infinity();
  r_max = 0;
  const int n = 1000;
  for (int i = 0; i <= n; ++i) {
    double xl = p.a * (1.0 - static_cast<double>(i) / n);
    double xr = p.b * static_cast<double>(i) / n;
    k_min = std::min({k_min, p.k(xl), p.kappa(xr)});
    r_max = std::max({r_max, p.r(xl), p.rho(xr)});
  }
}

std::vector<double> distinct_limit_values(const std::vector<double>& lf,
                                          const std::vector<double>& rp,
                                          double mu_max) {
  std::vector<double> all;
  for (double m : lf)
    if (m <= mu_max) all.push_back(m);
  for (double m : rp)
    if (m <= mu_max) all.push_back(m);
  detail::dedupe_roots(all, 1e-8);
  return all;
}

struct ScanResult {
  std::vector<double> roots;
};

ScanResult scan_for_roots(const ProblemSpec& p, double eps, double mu_lo,
                          double mu_max, const std::vector<double>& limit_values,
                          double base_step, double shoot_tol) {
  auto D = [&](double mu) { return mismatch(shoot_both(p, mu, shoot_tol), eps); };

  std::vector<double> grid;
  for (double mu = mu_lo; mu < mu_max; mu += base_step) grid.push_back(mu);
  grid.push_back(mu_max);

  std::vector<detail::Bracket> brackets = detail::scan_grid(D, grid);

  // Probe ladders resolve pairs bifurcating from limit eigenvalues; the
  // geometric spacing catches the sqrt(eps)-separated clusters at any eps.
  for (double mL : limit_values) {
    double seed = 1e-9 * (1.0 + mL);
    auto pts = detail::ladder_points(mL, seed, base_step);
    std::erase_if(pts, [&](double x) { return x <= mu_lo * 0.5 || x > mu_max; });
    if (pts.size() < 2) continue;
    auto extra = detail::scan_grid(D, pts);
    brackets.insert(brackets.end(), extra.begin(), extra.end());
  }

  std::vector<double> roots;
  for (const auto& br : brackets) {
    double root = br.lo == br.hi
                      ? br.lo
                      : detail::brent(D, br.lo, br.hi, br.flo, br.fhi, kRefineTol);
    roots.push_back(root);
  }
  detail::dedupe_roots(roots, 1e-10);
  return {std::move(roots)};
}

int internal_zeros(const EigenPair& pair) {
  // Concatenate the sampled values across the interface (skip the duplicate
  // x=0 sample) and count sign changes strictly inside (a,b).
  std::vector<double> vals(pair.left.values().begin(), pair.left.values().end());
  vals.insert(vals.end(), pair.right.values().begin() + 1,
              pair.right.values().end());
  return detail::internal_sign_changes(vals);
}

}  // namespace

double characteristic(const ProblemSpec& p, double eps, double mu, double tol) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("characteristic: eps must be in (0,1]");
  if (!(mu > 0.0))
    throw std::invalid_argument("characteristic: mu must be positive");
  return mismatch(shoot_both(p, mu, tol), eps);
}

std::vector<EigenPair> eigenvalues(const ProblemSpec& p, double eps, int count) {
  if (count < 1) throw std::invalid_argument("eigenvalues: count must be >= 1");
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("eigenvalues: eps must be in (0,1]");

  // Window from the Dirichlet comparison bound: mu_j <= mu_j^D.
  std::vector<double> rp = right_pinned_first(p, count);
  const double mu_max = 1.25 * rp.back();
  std::vector<double> lf = left_free_spectrum(p, mu_max);
  std::vector<double> limit_values = distinct_limit_values(lf, rp, mu_max);

  // Lower end of the scan from the constant-coefficient comparison bound.
  double k_min, r_max;
  coefficient_extrema(p, k_min, r_max);
  double omega1 = constant_case_roots(p.a, p.b, eps, 1).front();
  double mu_lo = 0.8 * (k_min / r_max) * omega1 * omega1;

  double min_gap = mu_max;
  for (std::size_t i = 1; i < limit_values.size(); ++i)
    min_gap = std::min(min_gap, limit_values[i] - limit_values[i - 1]);
  double base_step = std::min(min_gap / 8.0, (mu_max - mu_lo) / 128.0);

  double shoot_tol = 1e-11;
  for (int attempt = 0; attempt < 4; ++attempt) {
    ScanResult res = scan_for_roots(p, eps, mu_lo, mu_max, limit_values,
                                    base_step, shoot_tol);
    if (static_cast<int>(res.roots.size()) < count) {
      base_step *= 0.5;
      continue;
    }

    std::vector<EigenPair> out;
    bool certified = true;
    for (int j = 1; j <= count; ++j) {
      EigenPair pair;
      pair.j = j;
      pair.epsilon = eps;
      pair.mu = res.roots[j - 1];
      pair.lambda = eps * pair.mu;
      EigenPair full = eigenfunction(p, eps, pair);
      if (internal_zeros(full) != j - 1) {
        certified = false;
        break;
      }
      out.push_back(std::move(pair));
    }
    if (certified) return out;
    base_step *= 0.5;
  }
  throw NumericalError(
      "eigenvalues: cluster unresolved at scan resolution (eps=" +
      std::to_string(eps) + ", count=" + std::to_string(count) + ")");
}

EigenPair eigenfunction(const ProblemSpec& p, double eps, EigenPair pair) {
  auto kfn = [&p](double x) { return p.k(x); };
  auto rfn = [&p](double x) { return p.r(x); };
  auto kapfn = [&p](double x) { return p.kappa(x); };
  auto rhofn = [&p](double x) { return p.rho(x); };
  const double tol = 1e-12;

  FunctionTrace yl = integrate_ivp(kfn, rfn, pair.mu, p.a, 0.0, 0.0, 1.0, tol);
  FunctionTrace zr = integrate_ivp(kapfn, rhofn, pair.mu, p.b, 0.0, 0.0, -1.0, tol);

  // Matching scales: value-matched generically, flux-matched when the
  // interface values both vanish (a simultaneous one-sided Dirichlet
  // eigenvalue; the eigenfunction then has a genuine zero at the interface).
  double yl0 = yl.value(0.0), zr0 = zr.value(0.0);
  double cl, cr;
  if (std::abs(yl0) <= 1e-6 * yl.sup_scale() &&
      std::abs(zr0) <= 1e-6 * zr.sup_scale()) {
    cl = eps * p.kappa(0.0) * zr.deriv(0.0);
    cr = p.k(0.0) * yl.deriv(0.0);
    if (cl == 0.0 && cr == 0.0)
      throw NumericalError("eigenfunction: degenerate interface matching");
  } else {
    cl = zr0;
    cr = yl0;
  }

  FunctionTrace left = yl.scaled(cl), right = zr.scaled(cr);
  double n2 = trace_product_integral(rfn, left, left) +
              trace_product_integral(rhofn, right, right);
  double s = 1.0 / std::sqrt(n2);
  if (right.deriv(p.b) * s < 0) s = -s;
  pair.left = left.scaled(s);
  pair.right = right.scaled(s);
  return pair;
}

std::vector<EigenPair> eigenvalues_near(const ProblemSpec& p, double eps,
                                        double mu_center, int expected,
                                        double radius) {
  auto D = [&](double mu) { return mismatch(shoot_both(p, mu, 1e-11), eps); };
  double seed = 1e-9 * (1.0 + mu_center);
  auto pts = detail::ladder_points(mu_center, seed, radius);
  std::erase_if(pts, [](double x) { return x <= 0; });
  auto brackets = detail::scan_grid(D, pts);
  std::vector<double> roots;
  for (const auto& br : brackets)
    roots.push_back(br.lo == br.hi ? br.lo
                                   : detail::brent(D, br.lo, br.hi, br.flo,
                                                   br.fhi, kRefineTol));
  detail::dedupe_roots(roots, 1e-10);
  if (static_cast<int>(roots.size()) < expected)
    throw NumericalError("eigenvalues_near: expected " +
                         std::to_string(expected) + " roots near mu=" +
                         std::to_string(mu_center) + ", found " +
                         std::to_string(roots.size()));
  // Keep the `expected` roots nearest the center, in increasing order.
  std::sort(roots.begin(), roots.end(), [&](double x, double y) {
    return std::abs(x - mu_center) < std::abs(y - mu_center);
  });
  roots.resize(expected);
  std::sort(roots.begin(), roots.end());

  std::vector<EigenPair> out;
  for (double mu : roots) {
    EigenPair pair;
    pair.epsilon = eps;
    pair.mu = mu;
    pair.lambda = eps * mu;
    out.push_back(pair);
  }
  return out;
}

std::vector<double> constant_case_roots(double a, double b, double eps,
                                        int count) {
  if (count < 1) return {};
  auto g = [&](double w) {
    return std::cos(w * a) * std::sin(w * b) -
           eps * std::sin(w * a) * std::cos(w * b);
  };
  // Roots of the eps=0 equation seed the ladders; families
  // (m-1/2)pi/|a| and n pi/b, doubles where they coincide.
  const double step = std::min(M_PI / std::abs(a), M_PI / b) / 16.0;

  std::vector<double> roots;
  double lo = 1e-8;
  int guard = 0;
  while (static_cast<int>(roots.size()) < count && guard++ < 64) {
    double hi = lo + 64.0 * step;
    std::vector<double> grid;
    for (double w = lo; w <= hi; w += step) grid.push_back(w);
    auto brackets = detail::scan_grid(g, grid);

    std::vector<double> seeds;
    for (int m = 1; (m - 0.5) * M_PI / std::abs(a) <= hi; ++m)
      seeds.push_back((m - 0.5) * M_PI / std::abs(a));
    for (int n = 1; n * M_PI / b <= hi; ++n) seeds.push_back(n * M_PI / b);
    for (double sd : seeds) {
      if (sd < lo || sd > hi) continue;
      auto pts = detail::ladder_points(sd, 1e-12 * (1 + sd), step);
      std::erase_if(pts, [](double x) { return x <= 0; });
      auto extra = detail::scan_grid(g, pts);
      brackets.insert(brackets.end(), extra.begin(), extra.end());
    }
    for (const auto& br : brackets) {
      double root = br.lo == br.hi
                        ? br.lo
                        : detail::brent(g, br.lo, br.hi, br.flo, br.fhi, 1e-15);
      roots.push_back(root);
    }
    detail::dedupe_roots(roots, 1e-12);
    lo = hi;
  }
  if (static_cast<int>(roots.size()) < count)
    throw NumericalError("constant_case_roots: window exhausted");
  roots.resize(count);
  return roots;
}

}  // namespace stiffspec
