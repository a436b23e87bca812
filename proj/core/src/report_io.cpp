#include "stiffspec/report_io.hpp"

#include <cstdint>
#include <cstdio>

namespace stiffspec {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string text_hash(const std::string& canonical_text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string convergence_csv(const ConvergenceReport& rep,
                            const std::string& header_comment) {
  std::string out = "# " + header_comment + "\n";
  out += "# quantity: " + rep.quantity + "\n";
  out += "# fitted_slope=" + fmt17(rep.fitted_slope) +
         " expected_slope=" + fmt17(rep.expected_slope) +
         " slope_tol=" + fmt17(rep.slope_tol) +
         " pass=" + (rep.pass ? std::string("1") : std::string("0")) + "\n";
  out += rep.aux.empty() ? "eps,error\n" : "eps,error,aux\n";
  for (std::size_t i = 0; i < rep.eps_grid.size(); ++i) {
    out += fmt17(rep.eps_grid[i]) + "," + fmt17(rep.errors[i]);
    if (!rep.aux.empty()) out += "," + fmt17(rep.aux[i]);
    out += "\n";
  }
  return out;
}

nlohmann::ordered_json convergence_json(const ConvergenceReport& rep) {
  nlohmann::ordered_json j;
  j["quantity"] = rep.quantity;
  j["expected_slope"] = rep.expected_slope;
  j["fitted_slope"] = rep.fitted_slope;
  j["fit_intercept"] = rep.fit_intercept;
  j["slope_tol"] = rep.slope_tol;
  j["fit_skipped"] = rep.fit_skipped;
  j["pass"] = rep.pass;
  nlohmann::ordered_json series = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < rep.eps_grid.size(); ++i) {
    nlohmann::ordered_json pt;
    pt["eps"] = rep.eps_grid[i];
    pt["error"] = rep.errors[i];
    if (!rep.aux.empty()) pt["aux"] = rep.aux[i];
    series.push_back(pt);
  }
  j["series"] = series;
  if (!rep.aux_label.empty()) j["aux_label"] = rep.aux_label;
  if (!rep.notes.empty()) j["notes"] = rep.notes;
  return j;
}

nlohmann::ordered_json bounds_json(const BoundsReport& rep) {
  nlohmann::ordered_json j;
  j["pass"] = rep.pass;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : rep.rows) {
    nlohmann::ordered_json row;
    row["j"] = r.j;
    row["eps"] = r.eps;
    row["lambda"] = r.lambda;
    row["lower"] = r.lower;
    row["upper"] = r.upper;
    row["ok"] = r.ok;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

}  // namespace stiffspec
