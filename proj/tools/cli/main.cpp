#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cli/commands.hpp"
#include "cli/runconfig.hpp"

using namespace stiffspec::cli;

int main(int argc, char** argv) {
  CLI::App app{"stiffspec: spectral analysis of two-material transmission "
               "problems with a stiff-heavy / flexible-light contrast"};
  app.require_subcommand(1);

  std::string config_path, eps_list, out_dir, format;
  int count = -1, order = -1, samples = -1;

  for (const char* name : {"solve", "limit", "expand", "verify", "demo"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file");
    sub->add_option("--eps", eps_list, "comma-separated epsilon list");
    sub->add_option("--count", count, "number of eigenvalues/modes");
    sub->add_option("--order", order, "expansion order");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--format", format, "csv or json");
    sub->add_option("--samples", samples, "trace sample points to emit");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = RunConfig::from_file(config_path);
    if (!eps_list.empty()) {
      RunConfig tmp = RunConfig::from_text("[run]\neps = " + eps_list + "\n");
      cfg.eps = tmp.eps;
    }
    if (count >= 0) cfg.count = count;
    if (order >= 0) cfg.order = order;
    if (samples >= 0) cfg.samples = samples;
    if (!out_dir.empty()) cfg.out = out_dir;
    if (!format.empty()) {
      if (format != "csv" && format != "json")
        throw ConfigError("--format must be csv or json");
      cfg.format = format;
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  return run_command(name, cfg, std::cout);
}
