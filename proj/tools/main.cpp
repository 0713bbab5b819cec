#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bifluid/config.hpp"
#include "bifluid/csv.hpp"
#include "bifluid/entropy.hpp"
#include "bifluid/eos.hpp"
#include "bifluid/fvm.hpp"
#include "bifluid/hyperbolicity.hpp"
#include "bifluid/rankine_hugoniot.hpp"
#include "bifluid/state.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotCertified = 1;
constexpr int kExitMonotonicity = 2;
constexpr int kExitUsage = 64;
constexpr int kExitNoInput = 66;
constexpr int kExitSoftware = 70;
constexpr int kExitCantCreate = 73;

using bifluid::format_double;

int cmd_eos(double beta_min, double beta_max, int n, int dim) {
  if (!(0.0 < beta_min && beta_min < beta_max && beta_max < 1.0) || n < 1) {
    std::cerr << "eos: need 0 < beta_min < beta_max < 1 and n >= 1\n";
    return kExitUsage;
  }
  std::cout << "beta,F0,F2,S,S_prime\n";
  bool monotone = true;
  for (int i = 0; i < n; ++i) {
    const double beta =
        n == 1 ? beta_min : beta_min + (beta_max - beta_min) * i / (n - 1.0);
    const double sp = bifluid::eos::entropy_S_prime(beta, dim);
    if (sp >= 0.0) monotone = false;
    std::cout << format_double(beta) << ',' << format_double(bifluid::eos::F0(beta, dim))
              << ',' << format_double(bifluid::eos::F2(beta, dim)) << ','
              << format_double(bifluid::eos::entropy_S(beta, dim)) << ','
              << format_double(sp) << '\n';
  }
  return monotone ? kExitOk : kExitMonotonicity;
}

int cmd_hyp(const bifluid::PrimitiveState& state, const bifluid::ModelParams& params) {
  using namespace bifluid;
  if (!(state.rho_n > 0.0) || !(state.rho_s > 0.0)) {
    std::cerr << "hyp: densities must be positive\n";
    return kExitUsage;
  }
  const auto conds = check_conditions(state, params);
  std::cout << "state: rho_n=" << format_double(state.rho_n)
            << " rho_s=" << format_double(state.rho_s) << " u_n=" << format_double(state.u_n)
            << " u_s=" << format_double(state.u_s) << "\n";
  std::cout << "params: alpha=" << format_double(params.alpha)
            << " c_tilde=" << format_double(params.c_tilde)
            << " c=" << format_double(params.c()) << "\n";
  std::cout << "cond1=" << conds.cond1 << " cond2=" << conds.cond2 << " cond3=" << conds.cond3
            << "\n";
  const Spectrum spec = eigenvalues(state, params);
  std::cout << "certified=" << spec.certified << "\n";
  for (int i = 0; i < 4; ++i) {
    std::cout << "lambda_" << i + 1 << " = " << format_double(spec.lambdas[i]);
    if (spec.certified)
      std::cout << "  bracket [" << format_double(spec.brackets[i].lo) << ", "
                << format_double(spec.brackets[i].hi) << "]";
    std::cout << "\n";
  }
  const CharPoly poly = char_poly(state, params);
  const double sq_as = std::sqrt(poly.a_s);
  bool interlaced = spec.lambdas[0] < poly.u_s - sq_as && poly.u_s - sq_as < spec.lambdas[1] &&
                    spec.lambdas[1] < poly.u_s && poly.u_s < spec.lambdas[2] &&
                    spec.lambdas[2] < poly.u_s + sq_as && poly.u_s + sq_as < spec.lambdas[3];
  std::cout << "interlacing(u_s -+ sqrt(a_s)): " << (interlaced ? "yes" : "no") << "\n";
  bool distinct = true;
  for (int i = 0; i < 3; ++i)
    if (!(spec.lambdas[i] < spec.lambdas[i + 1])) distinct = false;
  for (int i = 0; i < 4; ++i) {
    try {
      const auto gnl = genuine_nonlinearity(spec.lambdas[i], state, params);
      std::cout << "field " << i + 1 << ": grad(lambda).X = " << format_double(gnl.value)
                << (gnl.certified_nonzero ? "  (certified nonzero)" : "") << "\n";
    } catch (const Error& err) {
      std::cout << "field " << i + 1 << ": " << err.what() << "\n";
    }
  }
  const bool hyperbolic = spec.certified && distinct;
  std::cout << (hyperbolic ? "strictly hyperbolic (certified)" : "not certified") << "\n";
  return hyperbolic ? kExitOk : kExitNotCertified;
}

int cmd_shock(const bifluid::PrimitiveState& left, double sigma0, double span, int steps,
              const bifluid::ModelParams& params, double kick_eps, const std::string& out) {
  using namespace bifluid;
  TraceOptions opts;
  opts.kick_eps = kick_eps;
  std::vector<ShockCurve> halves;
  halves.push_back(
      trace_shock_curve(left, sigma0, span, steps, params, TraceDirection::DecreasingSigma, opts));
  halves.push_back(
      trace_shock_curve(left, sigma0, span, steps, params, TraceDirection::IncreasingSigma, opts));
  for (const ShockCurve& half : halves)
    if (half.truncated)
      std::cerr << "shock: curve truncated at step " << half.truncated_at_step
                << (half.direction == TraceDirection::IncreasingSigma ? " (increasing)"
                                                                      : " (decreasing)")
                << "\n";
  write_shock_csv(out, halves, params);
  std::cout << "wrote " << out << " (seed condition number "
            << format_double(halves.front().seed_condition_number) << ")\n";
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const bifluid::ExperimentConfig& cfg,
                 const std::string& out_dir, bool gnuplot) {
  using namespace bifluid;
  std::filesystem::create_directories(out_dir);
  const auto frames = run(cfg.solver, cfg.grid, cfg.left, cfg.right, cfg.params);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string path = out_dir + "/frame_" + std::to_string(i) + ".csv";
    write_frame_csv(path, cfg.grid, frames[i], cfg.params);
  }
  write_monitors_csv(out_dir + "/monitors.csv", frames);
  if (gnuplot) {
    std::ofstream plot(out_dir + "/plot.gp");
    plot << "set datafile separator ','\n"
         << "set key autotitle columnhead\n"
         << "plot 'frame_" << frames.size() - 1 << ".csv' using 1:2 with lines title 'rho_n'\n"
         << "pause -1\n";
  }
  std::cout << "config " << config_path << ": " << frames.size() << " frames -> " << out_dir
            << "\n";
  return kExitOk;
}

int cmd_waves(const std::string& frame_path, const std::string& field, double slope_tol,
              int min_width) {
  using namespace bifluid;
  const CsvTable table = read_csv(frame_path);
  const std::vector<std::string> fields =
      field.empty() ? std::vector<std::string>{"rho_n", "rho_s", "u_n", "u_s"}
                    : std::vector<std::string>{field};
  for (const std::string& name : fields) {
    const std::vector<double> values = table.column(name);
    const int width = min_width > 0 ? min_width : default_min_width(static_cast<int>(values.size()));
    const int count = count_plateaus(values, slope_tol, width);
    if (field.empty())
      std::cout << name << ',' << count << '\n';
    else
      std::cout << count << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-fluid isentropic Euler toolbox: equation of state, hyperbolicity "
               "reports, shock curves and Lax-Friedrichs Riemann simulations"};
  app.require_subcommand(1);

  // eos
  double beta_min = 0.01, beta_max = 0.99;
  int eos_n = 99, eos_dim = 3;
  auto* eos = app.add_subcommand("eos", "tabulate beta, F0, F2, S, S' as CSV");
  eos->add_option("--beta-min", beta_min, "lower fugacity bound");
  eos->add_option("--beta-max", beta_max, "upper fugacity bound");
  eos->add_option("-n,--count", eos_n, "number of rows");
  eos->add_option("-N,--dimension", eos_dim, "space dimension");

  // shared state/params flags
  bifluid::PrimitiveState state;
  bifluid::ModelParams params;

  auto add_state_flags = [&](CLI::App* sub, bool required) {
    auto* a = sub->add_option("--rho-n", state.rho_n, "normal-fluid density");
    auto* b = sub->add_option("--rho-s", state.rho_s, "superfluid density");
    auto* c = sub->add_option("--u-n", state.u_n, "normal-fluid velocity");
    auto* d = sub->add_option("--u-s", state.u_s, "superfluid velocity");
    if (required) {
      a->required();
      b->required();
      c->required();
      d->required();
    }
    sub->add_option("--alpha", params.alpha, "interaction constant");
    sub->add_option("--c-tilde", params.c_tilde, "isentropic constant");
  };

  auto* hyp = app.add_subcommand("hyp", "hyperbolicity report for one state");
  add_state_flags(hyp, true);

  double sigma0 = 0.0, span = 0.2, kick_eps = 1e-3;
  int steps = 50;
  std::string shock_out = "shock_curve.csv";
  auto* shock = app.add_subcommand("shock", "trace a shock curve from a left state");
  add_state_flags(shock, true);
  shock->add_option("--sigma0", sigma0, "seed shock speed");
  shock->add_option("--span", span, "half-width of the sigma interval");
  shock->add_option("--steps", steps, "steps per half curve");
  shock->add_option("--kick", kick_eps, "first-step kick floor (0 stays on the trivial branch)");
  shock->add_option("-o,--out", shock_out, "output CSV path");

  std::string config_path, out_dir = "out";
  bool gnuplot = false;
  std::vector<std::string> overrides;
  auto* simulate = app.add_subcommand("simulate", "run a Riemann experiment from a config file");
  simulate->add_option("config", config_path, "key=value config file")->required();
  simulate->add_option("-o,--out-dir", out_dir, "output directory");
  simulate->add_flag("--gnuplot", gnuplot, "also emit a gnuplot script");
  simulate->add_option("--set", overrides, "override config entries (key=value)");

  std::string frame_path, waves_field;
  double slope_tol = 1e-3;
  int min_width = 0;
  auto* waves = app.add_subcommand("waves", "count plateaus in a frame CSV");
  waves->add_option("frame", frame_path, "frame CSV path")->required();
  waves->add_option("--field", waves_field, "one of rho_n, rho_s, u_n, u_s");
  waves->add_option("--slope-tol", slope_tol, "flatness threshold (fraction of range)");
  waves->add_option("--min-width", min_width, "minimum plateau width in cells (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (eos->parsed()) return cmd_eos(beta_min, beta_max, eos_n, eos_dim);
    if (hyp->parsed()) return cmd_hyp(state, params);
    if (shock->parsed())
      return cmd_shock(state, sigma0, span, steps, params, kick_eps, shock_out);
    if (simulate->parsed()) {
      bifluid::ExperimentConfig cfg;
      try {
        cfg = bifluid::load_config(config_path);
      } catch (const bifluid::ConfigError& err) {
        std::cerr << err.what() << "\n";
        const std::string what = err.what();
        return what.find("cannot open") != std::string::npos ? kExitNoInput : kExitUsage;
      }
      for (const std::string& entry : overrides) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
          std::cerr << "simulate: --set expects key=value, got '" << entry << "'\n";
          return kExitUsage;
        }
        bifluid::apply_config_key(cfg, entry.substr(0, eq), entry.substr(eq + 1));
      }
      return cmd_simulate(config_path, cfg, out_dir, gnuplot);
    }
    if (waves->parsed()) {
      if (!std::filesystem::exists(frame_path)) {
        std::cerr << "waves: no such file '" << frame_path << "'\n";
        return kExitNoInput;
      }
      return cmd_waves(frame_path, waves_field, slope_tol, min_width);
    }
  } catch (const bifluid::ConversionFailure& err) {
    std::cerr << "solver abort: " << err.what() << "\n";
    return kExitSoftware;
  } catch (const bifluid::ConfigError& err) {
    std::cerr << err.what() << "\n";
    return kExitUsage;
  } catch (const bifluid::Error& err) {
    const std::string what = err.what();
    std::cerr << what << "\n";
    if (what.find("cannot create") != std::string::npos) return kExitCantCreate;
    if (what.find("cannot open") != std::string::npos) return kExitNoInput;
    return kExitSoftware;
  }
  return kExitUsage;
}
