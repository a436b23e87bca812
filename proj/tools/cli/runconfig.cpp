#include "cli/runconfig.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "stiffspec/report_io.hpp"

namespace stiffspec::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing text");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for '" + key + "': " + v);
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    int i = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing text");
    return i;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for '" + key + "': " + v);
  }
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

}  // namespace

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig cfg;
  std::stringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": bad section header");
      section = line.substr(1, line.size() - 2);
      if (section != "problem" && section != "run" && section != "verify")
        throw ConfigError("config: unknown section [" + section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = unquote(trim(line.substr(eq + 1)));

    if (section == "problem") {
      if (key == "a") cfg.a = parse_double(key, val);
      else if (key == "b") cfg.b = parse_double(key, val);
      else if (key == "k") cfg.k = val;
      else if (key == "r") cfg.r = val;
      else if (key == "kappa") cfg.kappa = val;
      else if (key == "rho") cfg.rho = val;
      else throw ConfigError("config: unknown key '" + key + "' in [problem]");
    } else if (section == "run") {
      if (key == "eps") {
        cfg.eps.clear();
        for (const auto& e : split_list(val)) cfg.eps.push_back(parse_double("eps", e));
        if (cfg.eps.empty()) throw ConfigError("config: empty eps list");
      } else if (key == "count") cfg.count = parse_int(key, val);
      else if (key == "order") cfg.order = parse_int(key, val);
      else if (key == "out") cfg.out = val;
      else if (key == "format") {
        if (val != "csv" && val != "json")
          throw ConfigError("config: format must be csv or json");
        cfg.format = val;
      } else if (key == "samples") cfg.samples = parse_int(key, val);
      else throw ConfigError("config: unknown key '" + key + "' in [run]");
    } else if (section == "verify") {
      if (key == "studies") cfg.studies = split_list(val);
      else if (key == "corrupt_nu1") cfg.corrupt_nu1 = parse_double(key, val);
      else throw ConfigError("config: unknown key '" + key + "' in [verify]");
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": key outside a section");
    }
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_text(ss.str());
}

std::string RunConfig::serialize() const {
  std::string s;
  s += "[problem]\n";
  s += "a = " + fmt17(a) + "\n";
  s += "b = " + fmt17(b) + "\n";
  s += "k = \"" + k + "\"\n";
  s += "r = \"" + r + "\"\n";
  s += "kappa = \"" + kappa + "\"\n";
  s += "rho = \"" + rho + "\"\n";
  s += "\n[run]\n";
  s += "eps = ";
  for (std::size_t i = 0; i < eps.size(); ++i)
    s += (i ? "," : "") + fmt17(eps[i]);
  s += "\n";
  s += "count = " + std::to_string(count) + "\n";
  s += "order = " + std::to_string(order) + "\n";
  s += "out = " + out + "\n";
  s += "format = " + format + "\n";
  s += "samples = " + std::to_string(samples) + "\n";
  if (!studies.empty() || corrupt_nu1) {
    s += "\n[verify]\n";
    if (!studies.empty()) {
      s += "studies = ";
      for (std::size_t i = 0; i < studies.size(); ++i)
        s += (i ? "," : "") + studies[i];
      s += "\n";
    }
    if (corrupt_nu1) s += "corrupt_nu1 = " + fmt17(*corrupt_nu1) + "\n";
  }
  return s;
}

std::string RunConfig::hash() const { return text_hash(serialize()); }

ProblemSpec RunConfig::problem() const {
  try {
    return ProblemSpec::make(a, b, k, r, kappa, rho);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("config: coefficient parse error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace stiffspec::cli
