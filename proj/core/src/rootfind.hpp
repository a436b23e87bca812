#pragma once

// Private scan/bracket/refine helpers shared by the spectrum solvers.

#include <cmath>
#include <functional>
#include <vector>

#include "stiffspec/ivp.hpp"

namespace stiffspec::detail {

using Fn1 = std::function<double(double)>;

/// Brent's method on a sign-change bracket [a,b]; fa, fb are f at the ends.
/// Converges to |interval| <= xtol_rel*(1+|x|).
inline double brent(const Fn1& f, double a, double b, double fa, double fb,
                    double xtol_rel) {
  if (fa == 0) return a;
  if (fb == 0) return b;
  if (fa * fb > 0) throw NumericalError("brent: not a bracket");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    double tol1 = xtol_rel * (1.0 + std::abs(b));
    double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double s = fb / fa, p, q2;
      if (a == c) {
        p = 2 * xm * s;
        q2 = 1 - s;
      } else {
        double q = fa / fc, r = fb / fc;
        p = s * (2 * xm * q * (q - r) - (b - a) * (r - 1));
        q2 = (q - 1) * (r - 1) * (s - 1);
      }
      if (p > 0) q2 = -q2;
      p = std::abs(p);
      if (2 * p < std::min(3 * xm * q2 - std::abs(tol1 * q2), std::abs(e * q2))) {
        e = d;
        d = p / q2;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

struct Bracket {
  double lo, hi, flo, fhi;
};

/// Sign changes of f over an explicit ordered grid of points.
inline std::vector<Bracket> scan_grid(const Fn1& f, const std::vector<double>& grid,
                                      std::vector<double>* fvals = nullptr) {
  std::vector<Bracket> out;
  if (grid.size() < 2) return out;
  double prev = f(grid[0]);
  if (fvals) fvals->push_back(prev);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    double cur = f(grid[i]);
    if (fvals) fvals->push_back(cur);
    if (prev == 0.0)
      out.push_back({grid[i - 1], grid[i - 1], 0.0, 0.0});
    else if (prev * cur < 0)
      out.push_back({grid[i - 1], grid[i], prev, cur});
    prev = cur;
  }
  return out;
}

/// Geometric two-sided ladder of probe points around a center: catches
/// sign changes at every scale from `seed` up to `reach`. Used to resolve
/// bifurcating pairs clustered around a double limit eigenvalue.
inline std::vector<double> ladder_points(double center, double seed, double reach) {
  std::vector<double> pts;
  std::vector<double> offs;
  for (double d = seed; d < reach; d *= 2) offs.push_back(d);
  offs.push_back(reach);
  for (auto it = offs.rbegin(); it != offs.rend(); ++it) pts.push_back(center - *it);
  pts.push_back(center);
  for (double d : offs) pts.push_back(center + d);
  return pts;
}

/// Merge roots closer than rel-tol (same root found twice).
inline void dedupe_roots(std::vector<double>& roots, double rel = 1e-9) {
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [rel](double x, double y) {
                            return std::abs(y - x) <= rel * (1 + std::abs(x));
                          }),
              roots.end());
}

}  // namespace stiffspec::detail
