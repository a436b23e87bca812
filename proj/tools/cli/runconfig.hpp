#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stiffspec/problem.hpp"

namespace stiffspec::cli {

/// Configuration error (bad file, unknown key, malformed value): exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat sectioned key=value configuration:
///
///   [problem]
///   a = -1
///   b = 2
///   k = "1"
///   r = "1"
///   kappa = "1"
///   rho = "1"
///
///   [run]
///   eps = 1e-2,1e-3
///   count = 4
///   order = 3
///   out = out
///   format = csv
///   samples = 0
///
///   [verify]
///   studies = order,angle,projector,bounds,quasimode
///   corrupt_nu1 = 2.3        # fault injection, omit normally
///
/// Parsing and serialization round-trip to an equivalent config.
struct RunConfig {
  double a = -1.0;
  double b = 2.0;
  std::string k = "1", r = "1", kappa = "1", rho = "1";

  std::vector<double> eps = {1e-2};
  int count = 4;
  int order = 3;
  std::string out = "out";
  std::string format = "csv";
  int samples = 0;

  std::vector<std::string> studies;  // empty: all
  std::optional<double> corrupt_nu1;

  static RunConfig from_text(const std::string& text);
  static RunConfig from_file(const std::string& path);

  /// Canonical text form; the config hash stamped into outputs is the FNV-1a
  /// of this string.
  std::string serialize() const;
  std::string hash() const;

  /// Parses and validates the problem block; ConfigError on bad data.
  ProblemSpec problem() const;
};

}  // namespace stiffspec::cli
