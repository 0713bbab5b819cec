#include "bifluid/config.hpp"

#include <fstream>
#include <sstream>

namespace bifluid {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": '" + value + "'");
  }
  if (used != value.size())
    throw ConfigError("config: trailing characters in value for " + key + ": '" + value +
                      "'");
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("config: expected an integer for " + key + ", got '" + value + "'");
  return i;
}

}  // namespace

void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value) {
  if (key == "alpha") cfg.params.alpha = parse_double(key, value);
  else if (key == "c_tilde") cfg.params.c_tilde = parse_double(key, value);
  else if (key == "x_min") cfg.grid.x_min = parse_double(key, value);
  else if (key == "x_max") cfg.grid.x_max = parse_double(key, value);
  else if (key == "n_cells") cfg.grid.n_cells = parse_int(key, value);
  else if (key == "t_final") cfg.solver.t_final = parse_double(key, value);
  else if (key == "cfl") cfg.solver.cfl = parse_double(key, value);
  else if (key == "fixed_ratio") cfg.solver.fixed_ratio = parse_double(key, value);
  else if (key == "output_every") cfg.solver.output_every = parse_int(key, value);
  else if (key == "left.rho_n") cfg.left.rho_n = parse_double(key, value);
  else if (key == "left.rho_s") cfg.left.rho_s = parse_double(key, value);
  else if (key == "left.u_n") cfg.left.u_n = parse_double(key, value);
  else if (key == "left.u_s") cfg.left.u_s = parse_double(key, value);
  else if (key == "right.rho_n") cfg.right.rho_n = parse_double(key, value);
  else if (key == "right.rho_s") cfg.right.rho_s = parse_double(key, value);
  else if (key == "right.u_n") cfg.right.u_n = parse_double(key, value);
  else if (key == "right.u_s") cfg.right.u_s = parse_double(key, value);
  else throw ConfigError("config: unknown key '" + key + "'");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key=value");
    apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

}  // namespace bifluid
