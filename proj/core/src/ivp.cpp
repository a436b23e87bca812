#include "stiffspec/ivp.hpp"

#include <algorithm>
#include <cmath>

namespace stiffspec {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct State {
  double u, v;  // v = p u'
};

struct Recorder {
  std::vector<double> xs, us, dus;
  void push(double x, double u, double uprime) {
    xs.push_back(x);
    us.push_back(u);
    dus.push_back(uprime);
  }
};

// Shared adaptive driver. `rec` may be null for endpoint-only integration.
State drive(const RealFn& p, const RealFn& q, double mu, double from,
            double to, State y, const RealFn* f, double tol, Recorder* rec) {
  if (!(tol >= 1e-14 && tol <= 1e-6))
    throw std::invalid_argument("integrate_ivp: tol must be in [1e-14, 1e-6]");
  const double span = to - from;
  if (span == 0.0)
    throw std::invalid_argument("integrate_ivp: empty integration interval");

  auto deriv = [&](double x, const State& s) -> State {
    double fx = f ? (*f)(x) : 0.0;
    double px = p(x);
    if (!(px > 0.0) || !std::isfinite(px))
      throw NumericalError("integrate_ivp: coefficient p not positive/finite");
    return {s.v / px, fx - mu * q(x) * s.u};
  };

  const double dir = span > 0 ? 1.0 : -1.0;
  const double max_h = std::abs(span) / (rec ? 64.0 : 16.0);
  double h = dir * std::min(std::abs(span) / 100.0, max_h);
  double x = from;

  State k1 = deriv(x, y);
  // Solution scale for the mixed control; seeded from the initial data and
  // the size the initial slopes can generate over the interval (a zero start
  // with forcing must not collapse the scale), floored to keep problems with
  // a vanishing initial forcing from spiralling.
  const double aspan = std::abs(span);
  double scale = std::max({std::abs(y.u), std::abs(y.v),
                           aspan * std::abs(k1.u), aspan * aspan * std::abs(k1.v),
                           1e-6});
  if (rec) rec->push(x, y.u, k1.u);

  const double hmin = 1e-14 * std::abs(span);
  int accepted = 0;
  while (dir * (to - x) > 0) {
    if (dir * (x + h) > dir * to) h = to - x;
    if (std::abs(h) < hmin)
      throw NumericalError("integrate_ivp: step-size underflow");

    auto stage = [&](double frac, double du, double dv) {
      return deriv(x + frac * h, {y.u + h * du, y.v + h * dv});
    };
    State k2 = stage(c2, a21 * k1.u, a21 * k1.v);
    State k3 = stage(c3, a31 * k1.u + a32 * k2.u, a31 * k1.v + a32 * k2.v);
    State k4 = stage(c4, a41 * k1.u + a42 * k2.u + a43 * k3.u,
                     a41 * k1.v + a42 * k2.v + a43 * k3.v);
    State k5 = stage(c5, a51 * k1.u + a52 * k2.u + a53 * k3.u + a54 * k4.u,
                     a51 * k1.v + a52 * k2.v + a53 * k3.v + a54 * k4.v);
    State k6 = stage(1.0,
                     a61 * k1.u + a62 * k2.u + a63 * k3.u + a64 * k4.u + a65 * k5.u,
                     a61 * k1.v + a62 * k2.v + a63 * k3.v + a64 * k4.v + a65 * k5.v);
    State ynew{y.u + h * (b1 * k1.u + b3 * k3.u + b4 * k4.u + b5 * k5.u + b6 * k6.u),
               y.v + h * (b1 * k1.v + b3 * k3.v + b4 * k4.v + b5 * k5.v + b6 * k6.v)};
    State k7 = deriv(x + h, ynew);  // FSAL

    double err_u = h * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u + e7 * k7.u);
    double err_v = h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v + e6 * k6.v + e7 * k7.v);
    double den_u = tol * scale + tol * std::max(std::abs(y.u), std::abs(ynew.u));
    double den_v = tol * scale + tol * std::max(std::abs(y.v), std::abs(ynew.v));
    // Error per unit step, so `tol` bounds the accumulated error over the
    // whole interval rather than a single step.
    double hfrac = std::abs(h) / std::abs(span);
    double err = std::sqrt(0.5 * ((err_u / den_u) * (err_u / den_u) +
                                  (err_v / den_v) * (err_v / den_v))) /
                 hfrac;

    if (err <= 1.0) {
      x += h;
      y = ynew;
      k1 = k7;
      scale = std::max({scale, std::abs(y.u), std::abs(y.v)});
      if (rec) rec->push(x, y.u, k1.u);
      ++accepted;
    }
    // EPUS: the controlled quantity scales like h^4.
    double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.25);
    h *= std::clamp(fac, 0.2, 5.0);
    if (std::abs(h) > max_h) h = dir * max_h;
  }
  return y;
}

FunctionTrace finish_trace(Recorder&& rec, bool reversed) {
  if (reversed) {
    std::reverse(rec.xs.begin(), rec.xs.end());
    std::reverse(rec.us.begin(), rec.us.end());
    std::reverse(rec.dus.begin(), rec.dus.end());
  }
  return FunctionTrace::from_samples(std::move(rec.xs), std::move(rec.us),
                                     std::move(rec.dus));
}

}  // namespace

FunctionTrace integrate_ivp(const RealFn& p, const RealFn& q, double mu,
                            double from, double to, double u0, double pu0,
                            double tol) {
  Recorder rec;
  drive(p, q, mu, from, to, {u0, pu0}, nullptr, tol, &rec);
  return finish_trace(std::move(rec), to < from);
}

FunctionTrace integrate_ivp_forced(const RealFn& p, const RealFn& q, double mu,
                                   double from, double to, double u0,
                                   double pu0, const RealFn& f, double tol) {
  Recorder rec;
  drive(p, q, mu, from, to, {u0, pu0}, &f, tol, &rec);
  return finish_trace(std::move(rec), to < from);
}

FunctionTrace integrate_ivp_forced(const RealFn& p, const RealFn& q, double mu,
                                   double from, double to, double u0,
                                   double pu0, const FunctionTrace& f,
                                   double tol) {
  RealFn ff = [&f](double x) { return f.value(x); };
  return integrate_ivp_forced(p, q, mu, from, to, u0, pu0, ff, tol);
}

IvpEnd integrate_ivp_endpoint(const RealFn& p, const RealFn& q, double mu,
                              double from, double to, double u0, double pu0,
                              double tol) {
  auto s = drive(p, q, mu, from, to, {u0, pu0}, nullptr, tol, nullptr);
  return {s.u, s.v};
}

}  // namespace stiffspec
