#include "stiffspec/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "stiffspec/ivp.hpp"

namespace stiffspec {

namespace {

// Kronrod-15 abscissae/weights on [-1,1] and the embedded Gauss-7 weights.
constexpr double xk[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,
    0.741531185599394,  0.864864423359769,  0.949107912342759,
    0.991455371120813};
constexpr double wk[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529};
constexpr double wg[7] = {0.129484966168870, 0.279705391489277,
                          0.381830050505119, 0.417959183673469,
                          0.381830050505119, 0.279705391489277,
                          0.129484966168870};

struct Panel {
  double integral, error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double hw = 0.5 * (b - a), mid = 0.5 * (a + b);
  double ik = 0, ig = 0;
  for (int i = 0; i < 15; ++i) {
    double v = f(mid + hw * xk[i]);
    ik += wk[i] * v;
    if (i % 2 == 1) ig += wg[i / 2] * v;
  }
  ik *= hw;
  ig *= hw;
  // |K15 - G7| is a safe (over-)estimate of the K15 error.
  return {ik, std::abs(ik - ig)};
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol_abs, int depth) {
  Panel p = gk15(f, a, b);
  if (p.error <= tol_abs || b - a < 1e-14 * (1 + std::abs(a) + std::abs(b)))
    return p.integral;
  if (depth > 48)
    throw NumericalError("quad: refinement depth exhausted");
  double mid = 0.5 * (a + b);
  return adapt(f, a, mid, 0.5 * tol_abs, depth + 1) +
         adapt(f, mid, b, 0.5 * tol_abs, depth + 1);
}

// 7-point Gauss-Legendre on [-1,1].
constexpr double xg7[7] = {-0.949107912342759, -0.741531185599394,
                           -0.405845151377397, 0.0,
                           0.405845151377397,  0.741531185599394,
                           0.949107912342759};

}  // namespace

double quad(const std::function<double(double)>& f, double lo, double hi,
            double tol) {
  if (lo == hi) return 0.0;
  double sign = 1.0;
  if (hi < lo) {
    std::swap(lo, hi);
    sign = -1.0;
  }
  // First pass fixes the tolerance scale; second pass refines against it.
  Panel coarse = gk15(f, lo, hi);
  double tol_abs = tol * (1.0 + std::abs(coarse.integral));
  return sign * adapt(f, lo, hi, tol_abs, 0);
}

double quad_mesh(const std::function<double(double)>& f,
                 const std::vector<double>& mesh) {
  double total = 0;
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    double hw = 0.5 * (mesh[i + 1] - mesh[i]);
    double mid = 0.5 * (mesh[i + 1] + mesh[i]);
    if (hw <= 0) continue;
    double s = 0;
    for (int g = 0; g < 7; ++g) s += wg[g] * f(mid + hw * xg7[g]);
    total += hw * s;
  }
  return total;
}

std::vector<double> merged_mesh(const FunctionTrace& A, const FunctionTrace& B) {
  double lo = std::max(A.lo(), B.lo()), hi = std::min(A.hi(), B.hi());
  std::vector<double> m;
  m.reserve(A.nodes().size() + B.nodes().size());
  std::merge(A.nodes().begin(), A.nodes().end(), B.nodes().begin(),
             B.nodes().end(), std::back_inserter(m));
  m.erase(std::remove_if(m.begin(), m.end(),
                         [&](double x) { return x < lo || x > hi; }),
          m.end());
  m.insert(m.begin(), lo);
  m.push_back(hi);
  std::sort(m.begin(), m.end());
  const double tol = 1e-13 * (1 + std::abs(lo) + std::abs(hi));
  m.erase(std::unique(m.begin(), m.end(),
                      [tol](double a, double b) { return b - a <= tol; }),
          m.end());
  return m;
}

double trace_product_integral(const std::function<double(double)>& w,
                              const FunctionTrace& A, const FunctionTrace& B) {
  auto mesh = merged_mesh(A, B);
  auto f = [&](double x) {
    double v = A.value(x) * B.value(x);
    return w ? w(x) * v : v;
  };
  return quad_mesh(f, mesh);
}

}  // namespace stiffspec
