#include "cli/commands.hpp"

#include <filesystem>
#include <fstream>

#include "stiffspec/expansion.hpp"
#include "stiffspec/limit_spectrum.hpp"
#include "stiffspec/report_io.hpp"
#include "stiffspec/studies.hpp"
#include "stiffspec/transmission.hpp"

#include "json.hpp"

namespace stiffspec::cli {

namespace {

using nlohmann::ordered_json;

void write_file(const RunConfig& cfg, const std::string& name,
                const std::string& content) {
  std::filesystem::create_directories(cfg.out);
  std::ofstream f(std::filesystem::path(cfg.out) / name, std::ios::binary);
  f << content;
}

std::string header_line(const RunConfig& cfg, const std::string& command) {
  return "stiffspec " + command + " config=" + cfg.hash() +
         " ivp_tol=1e-11 refine_tol=1e-13";
}

void check_run_block(const RunConfig& cfg) {
  if (cfg.count < 1) throw ConfigError("count must be >= 1");
  if (cfg.order < 0) throw ConfigError("order must be >= 0");
  for (double e : cfg.eps)
    if (!(e > 0.0 && e <= 1.0)) throw ConfigError("eps values must be in (0,1]");
}

const char* kind_name(ModeKind k) {
  switch (k) {
    case ModeKind::SimpleLeft: return "simple-left";
    case ModeKind::SimpleRight: return "simple-right";
    case ModeKind::Double: return "double";
  }
  return "?";
}

ordered_json sampled_trace(const FunctionTrace& t, int samples) {
  ordered_json j;
  std::vector<double> xs, us;
  for (int i = 0; i < samples; ++i) {
    double x = t.lo() + (t.hi() - t.lo()) * i / (samples - 1);
    xs.push_back(x);
    us.push_back(t.value(x));
  }
  j["x"] = xs;
  j["u"] = us;
  return j;
}

/// First `count` slots of the limit spectrum (multiplicity expanded).
LimitSpectrum limit_slots(const ProblemSpec& p, int count) {
  double cap = 1.25 * right_pinned_first(p, count).back();
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto spec = classify(left_free_spectrum(p, cap), right_pinned_spectrum(p, cap));
    if (static_cast<int>(spec.modes.size()) >= count) {
      spec.modes.resize(count);
      return spec;
    }
    cap *= 2.0;
  }
  throw NumericalError("limit spectrum window exhausted");
}

int clamped_order(const RunConfig& cfg, std::ostream& log) {
  if (cfg.order > kMaxExpansionOrder) {
    log << "order " << cfg.order << " clamped to " << kMaxExpansionOrder
        << " (half-power terms sink below integrator noise beyond that)\n";
    return kMaxExpansionOrder;
  }
  return cfg.order;
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  check_run_block(cfg);
  ProblemSpec p = cfg.problem();

  std::string csv = "# " + header_line(cfg, "solve") + "\n";
  csv += "j,eps,lambda,mu\n";
  ordered_json jout;
  jout["config"] = cfg.hash();
  ordered_json rows = ordered_json::array();
  std::string samples_csv = "# " + header_line(cfg, "solve samples") + "\n";
  samples_csv += "j,eps,x,u,du\n";

  for (double eps : cfg.eps) {
    auto evs = eigenvalues(p, eps, cfg.count);
    for (const auto& ev : evs) {
      csv += std::to_string(ev.j) + "," + fmt17(eps) + "," + fmt17(ev.lambda) +
             "," + fmt17(ev.mu) + "\n";
      ordered_json row;
      row["j"] = ev.j;
      row["eps"] = eps;
      row["lambda"] = ev.lambda;
      row["mu"] = ev.mu;
      rows.push_back(row);
      if (cfg.samples > 0) {
        EigenPair full = eigenfunction(p, eps, ev);
        for (int i = 0; i < cfg.samples; ++i) {
          double x = p.a + (p.b - p.a) * i / (cfg.samples - 1);
          double u = x < 0 ? full.left.value(x) : full.right.value(x);
          double du = x < 0 ? full.left.deriv(x) : full.right.deriv(x);
          samples_csv += std::to_string(ev.j) + "," + fmt17(eps) + "," +
                         fmt17(x) + "," + fmt17(u) + "," + fmt17(du) + "\n";
        }
      }
    }
  }
  jout["eigenvalues"] = rows;

  if (cfg.format == "json")
    write_file(cfg, "eigenvalues.json", jout.dump(2) + "\n");
  else
    write_file(cfg, "eigenvalues.csv", csv);
  if (cfg.samples > 0) write_file(cfg, "eigenfunctions.csv", samples_csv);
  log << "wrote eigenvalues for " << cfg.eps.size() << " eps value(s)\n";
  return kExitOk;
}

int cmd_limit(const RunConfig& cfg, std::ostream& log) {
  check_run_block(cfg);
  ProblemSpec p = cfg.problem();
  LimitSpectrum spec = limit_slots(p, cfg.count);

  std::string csv = "# " + header_line(cfg, "limit") + "\n";
  csv += "index,mu,kind,omega,exact\n";
  ordered_json jout;
  jout["config"] = cfg.hash();
  ordered_json rows = ordered_json::array();

  for (std::size_t i = 0; i < spec.modes.size(); ++i) {
    LimitMode mode = spec.modes[i];
    bool first_slot =
        mode.kind != ModeKind::Double || i == 0 ||
        std::abs(spec.modes[i - 1].mu - mode.mu) > 1e-9 * (1 + mode.mu);
    std::string omega_field, exact_field = "0";
    if (mode.kind == ModeKind::Double && first_slot) {
      mode = adjoined_vector(p, mode);
      omega_field = fmt17(*mode.coupling);
    } else if (mode.kind == ModeKind::SimpleLeft) {
      mode = limit_eigenfunction(p, mode);
      if (mode.exact_mode) exact_field = "1";
    }
    csv += std::to_string(i + 1) + "," + fmt17(mode.mu) + "," +
           kind_name(mode.kind) + "," + omega_field + "," + exact_field + "\n";
    ordered_json row;
    row["index"] = i + 1;
    row["mu"] = mode.mu;
    row["kind"] = kind_name(mode.kind);
    if (!omega_field.empty()) row["omega"] = *mode.coupling;
    row["exact"] = exact_field == "1";
    rows.push_back(row);
  }
  jout["modes"] = rows;

  if (cfg.format == "json")
    write_file(cfg, "limit_spectrum.json", jout.dump(2) + "\n");
  else
    write_file(cfg, "limit_spectrum.csv", csv);
  log << "wrote limit spectrum (" << spec.modes.size() << " slots)\n";
  return kExitOk;
}

int cmd_expand(const RunConfig& cfg, std::ostream& log) {
  check_run_block(cfg);
  ProblemSpec p = cfg.problem();
  const int order = clamped_order(cfg, log);
  LimitSpectrum spec = limit_slots(p, cfg.count);
  const int samples = cfg.samples > 0 ? cfg.samples : 65;

  ExpandOptions opt;
  if (cfg.corrupt_nu1) opt.nu1_override = *cfg.corrupt_nu1;

  ordered_json jout;
  jout["config"] = cfg.hash();
  ordered_json modes = ordered_json::array();

  auto series_json = [&](const ExpansionSeries& s) {
    ordered_json sj;
    switch (s.branch) {
      case Branch::Single: sj["branch"] = "single"; break;
      case Branch::Plus: sj["branch"] = "plus"; break;
      case Branch::Minus: sj["branch"] = "minus"; break;
    }
    sj["nu"] = s.nu;
    sj["exact_flag"] = s.exact_flag;
    ordered_json lc = ordered_json::array(), rc = ordered_json::array();
    for (const auto& t : s.left_coeffs) lc.push_back(sampled_trace(t, samples));
    for (const auto& t : s.right_coeffs) rc.push_back(sampled_trace(t, samples));
    sj["left_coeffs"] = lc;
    sj["right_coeffs"] = rc;
    return sj;
  };

  for (std::size_t i = 0; i < spec.modes.size(); ++i) {
    const LimitMode& mode = spec.modes[i];
    if (mode.kind == ModeKind::Double && i > 0 &&
        std::abs(spec.modes[i - 1].mu - mode.mu) <= 1e-9 * (1 + mode.mu))
      continue;  // second slot of the pair
    ordered_json mj;
    mj["index"] = i + 1;
    mj["mu"] = mode.mu;
    mj["kind"] = kind_name(mode.kind);
    ordered_json branches = ordered_json::array();
    if (mode.kind == ModeKind::Double) {
      auto [plus, minus] = expand_double(p, mode, order, opt);
      branches.push_back(series_json(plus));
      branches.push_back(series_json(minus));
      mj["exact_flag"] = false;
    } else {
      ExpansionSeries s = mode.kind == ModeKind::SimpleLeft
                              ? expand_simple_left(p, mode, order, opt)
                              : expand_simple_right(p, mode, order, opt);
      branches.push_back(series_json(s));
      mj["exact_flag"] = s.exact_flag;
    }
    mj["branches"] = branches;
    modes.push_back(mj);
  }
  jout["modes"] = modes;
  write_file(cfg, "series.json", jout.dump(2) + "\n");
  log << "wrote series.json\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  check_run_block(cfg);
  ProblemSpec p = cfg.problem();
  const int order = std::min(clamped_order(cfg, log), 3);

  StudyOptions sopt;
  sopt.eps_grid = cfg.eps.size() >= 4 ? cfg.eps : default_eps_grid(6);
  std::sort(sopt.eps_grid.begin(), sopt.eps_grid.end(), std::greater<>());

  auto enabled = [&](const std::string& s) {
    if (cfg.studies.empty()) return true;
    return std::find(cfg.studies.begin(), cfg.studies.end(), s) != cfg.studies.end();
  };

  ExpandOptions xopt;
  if (cfg.corrupt_nu1) xopt.nu1_override = *cfg.corrupt_nu1;

  LimitSpectrum spec = limit_slots(p, std::max(cfg.count, 2));
  const LimitMode* first_double = nullptr;
  const LimitMode* first_simple = nullptr;
  for (const auto& m : spec.modes) {
    if (m.kind == ModeKind::Double && !first_double) first_double = &m;
    if (m.kind != ModeKind::Double && !first_simple) first_simple = &m;
  }

  bool all_pass = true;
  ordered_json jout;
  jout["config"] = cfg.hash();
  ordered_json reports = ordered_json::array();

  auto add_report = [&](const std::string& name, const ConvergenceReport& rep) {
    all_pass = all_pass && rep.pass;
    ordered_json rj = convergence_json(rep);
    rj["name"] = name;
    reports.push_back(rj);
    if (cfg.format == "csv")
      write_file(cfg, name + ".csv",
                 convergence_csv(rep, header_line(cfg, "verify " + name)));
  };
  auto add_failure = [&](const std::string& name, const std::string& why) {
    all_pass = false;
    ordered_json rj;
    rj["name"] = name;
    rj["pass"] = false;
    rj["error"] = why;
    reports.push_back(rj);
    log << name << " failed: " << why << "\n";
  };

  if (first_double) {
    try {
      LimitMode dmode = adjoined_vector(p, *first_double);
      auto [plus, minus] = expand_double(p, dmode, std::max(order, 1), xopt);
      if (enabled("order")) {
        for (int n = 1; n <= std::max(order, 1); ++n) {
          add_report("order_double_plus_n" + std::to_string(n),
                     order_study(p, plus, n, sopt));
          add_report("order_double_minus_n" + std::to_string(n),
                     order_study(p, minus, n, sopt));
        }
      }
      if (enabled("eigenfunction"))
        add_report("eigenfunction_double_n1",
                   eigenfunction_error_study(p, plus, 1, sopt));
      if (enabled("angle")) add_report("angle", angle_study(p, dmode, sopt));
      if (enabled("projector"))
        add_report("projector", projector_study(p, dmode, sopt));
      if (enabled("quasimode")) {
        ordered_json qrows = ordered_json::array();
        bool qpass = true;
        for (const ExpansionSeries* s : {&plus, &minus}) {
          for (double eps : sopt.eps_grid) {
            PartialSum sum = partial_sum(*s, eps);
            auto chk = quasimode_containment(p, eps, sum);
            qpass = qpass && chk.contained;
            ordered_json row;
            row["branch"] = s->branch == Branch::Plus ? "plus" : "minus";
            row["eps"] = eps;
            row["sigma"] = chk.sigma;
            row["distance"] = chk.distance;
            row["contained"] = chk.contained;
            qrows.push_back(row);
          }
        }
        all_pass = all_pass && qpass;
        jout["quasimodes"] = qrows;
        jout["quasimodes_pass"] = qpass;
      }
    } catch (const NumericalError& e) {
      add_failure("double_mode_pipeline", e.what());
    }
  }

  if (first_simple) {
    try {
      ExpansionSeries s = first_simple->kind == ModeKind::SimpleLeft
                              ? expand_simple_left(p, *first_simple, order, xopt)
                              : expand_simple_right(p, *first_simple, order, xopt);
      if (enabled("order")) {
        add_report("order_simple_n0", order_study(p, s, 0, sopt));
        if (s.order >= 1)
          add_report("order_simple_n1", order_study(p, s, 1, sopt));
      }
      if (enabled("h2"))
        add_report("h2_tail", h2_tail_study(p, *first_simple, sopt));
    } catch (const NumericalError& e) {
      add_failure("simple_mode_pipeline", e.what());
    }
  }

  if (enabled("bounds")) {
    try {
      auto brep = bounds_check(p, sopt.eps_grid, std::min(cfg.count, 6));
      all_pass = all_pass && brep.pass;
      jout["bounds"] = bounds_json(brep);
      if (cfg.format == "csv") {
        std::string csv = "# " + header_line(cfg, "verify bounds") + "\n";
        csv += "j,eps,lambda,lower,upper,ok\n";
        for (const auto& row : brep.rows)
          csv += std::to_string(row.j) + "," + fmt17(row.eps) + "," +
                 fmt17(row.lambda) + "," + fmt17(row.lower) + "," +
                 fmt17(row.upper) + "," + (row.ok ? "1" : "0") + "\n";
        write_file(cfg, "bounds.csv", csv);
      }
    } catch (const NumericalError& e) {
      add_failure("bounds", e.what());
    }
  }

  jout["reports"] = reports;
  jout["pass"] = all_pass;
  write_file(cfg, "report.json", jout.dump(2) + "\n");
  log << (all_pass ? "verify: all checks passed\n"
                   : "verify: FAILURES recorded in report.json\n");
  return all_pass ? kExitOk : kExitVerifyFail;
}

int cmd_demo(RunConfig cfg, std::ostream& log) {
  cfg.a = -1;
  cfg.b = 2;
  cfg.k = cfg.r = cfg.kappa = cfg.rho = "1";
  if (cfg.count < 6) cfg.count = 6;
  int rc = cmd_solve(cfg, log);
  if (rc != kExitOk) return rc;
  rc = cmd_limit(cfg, log);
  if (rc != kExitOk) return rc;
  rc = cmd_expand(cfg, log);
  if (rc != kExitOk) return rc;
  log << "demo artifacts in " << cfg.out << "\n";
  return kExitOk;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log) {
  try {
    if (name == "solve") return cmd_solve(cfg, log);
    if (name == "limit") return cmd_limit(cfg, log);
    if (name == "expand") return cmd_expand(cfg, log);
    if (name == "verify") return cmd_verify(cfg, log);
    if (name == "demo") return cmd_demo(cfg, log);
    log << "unknown command " << name << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    log << "parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    log << "usage error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace stiffspec::cli
