#include "stiffspec/problem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stiffspec {

namespace {

// Returns the sampled minimum, or nan with a failure message appended.
double positivity_margin(const CoeffExpr& c, const char* name, double lo,
                         double hi, int samples, std::vector<std::string>& out) {
  if (!c.valid()) {
    out.push_back(std::string(name) + ": no expression");
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (auto issue = c.domain_issue(lo, hi, samples)) {
    out.push_back(std::string(name) + ": " + *issue);
    return std::numeric_limits<double>::quiet_NaN();
  }
  double mn = std::numeric_limits<double>::infinity();
  const int n = samples < 2 ? 2 : samples;
  for (int i = 0; i < n; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    mn = std::min(mn, c(x));
  }
  if (!(mn > 0.0)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s: non-positive (min sampled value %.6g)", name, mn);
    out.push_back(buf);
  }
  return mn;
}

}  // namespace

ValidationReport validate_problem(const ProblemSpec& p, int samples) {
  ValidationReport rep;
  if (!(p.a < 0.0)) rep.failures.push_back("a must be negative");
  if (!(p.b > 0.0)) rep.failures.push_back("b must be positive");
  if (!std::isfinite(p.a) || !std::isfinite(p.b))
    rep.failures.push_back("endpoints must be finite");

  if (rep.failures.empty()) {
    rep.min_k = positivity_margin(p.k, "k", p.a, 0.0, samples, rep.failures);
    rep.min_r = positivity_margin(p.r, "r", p.a, 0.0, samples, rep.failures);
    rep.min_kappa = positivity_margin(p.kappa, "kappa", 0.0, p.b, samples, rep.failures);
    rep.min_rho = positivity_margin(p.rho, "rho", 0.0, p.b, samples, rep.failures);
  }
  rep.ok = rep.failures.empty();
  return rep;
}

ProblemSpec ProblemSpec::make(double a, double b, const std::string& k,
                              const std::string& r, const std::string& kappa,
                              const std::string& rho) {
  ProblemSpec p;
  p.a = a;
  p.b = b;
  p.k = CoeffExpr::parse(k);
  p.r = CoeffExpr::parse(r);
  p.kappa = CoeffExpr::parse(kappa);
  p.rho = CoeffExpr::parse(rho);
  ValidationReport rep = validate_problem(p);
  if (!rep.ok) {
    std::string msg = "invalid problem:";
    for (const auto& f : rep.failures) msg += " " + f + ";";
    throw std::invalid_argument(msg);
  }
  return p;
}

}  // namespace stiffspec
