// Command-line front end: tau evaluation, channel sweeps, the verification
// campaign, and sudden-death thresholds. Exit codes: 0 ok, 1 verification
// failure, 2 parse error, 3 invalid quantum object, 4 I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qtau/errors.hpp"
#include "qtau/harness.hpp"

namespace {

struct CliValues {
  std::string config_path;
  std::optional<std::size_t> d;
  std::optional<std::string> channel;
  std::optional<double> eps;
  std::optional<std::string> eps_grid;
  std::optional<std::string> state;
  std::optional<double> fidelity;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> family;
};

void add_common_flags(CLI::App* cmd, CliValues& v) {
  cmd->add_option("--config", v.config_path, "JSON config file (flags override it)");
  cmd->add_option("--d", v.d, "subsystem dimension");
  cmd->add_option("--channel", v.channel,
                  "depolarizing | phase_damping | kraus:<path.json>");
  cmd->add_option("--eps", v.eps, "channel strength in [0,1]");
  cmd->add_option("--eps-grid", v.eps_grid, "sweep grid start:stop:points");
  cmd->add_option("--state", v.state,
                  "maxent | schmidt:w0,w1,... | isotropic | werner:<mu> | random:<rank> | "
                  "file:<path.json>");
  cmd->add_option("--fidelity", v.fidelity, "isotropic fidelity F");
  cmd->add_option("--trials", v.trials, "Monte Carlo trials per check");
  cmd->add_option("--seed", v.seed, "random seed");
  cmd->add_option("--out", v.out, "output path (default stdout)");
  cmd->add_option("--family", v.family,
                  "depolarizing_pure | depolarizing_isotropic | phase_damping_pure");
}

qtau::RunConfig build_config(const CliValues& v, qtau::Command command) {
  qtau::RunConfig config;
  config.command = command;
  if (!v.config_path.empty())
    qtau::apply_config_json(qtau::parse_json_file(v.config_path), config);
  if (v.d) config.d = *v.d;
  if (v.channel) config.channel = *v.channel;
  if (v.eps) config.eps = *v.eps;
  if (v.eps_grid) {
    const std::string& g = *v.eps_grid;
    const std::size_t c1 = g.find(':');
    const std::size_t c2 = g.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw qtau::ParseError("--eps-grid expects start:stop:points, got '" + g + "'");
    try {
      config.grid_start = std::stod(g.substr(0, c1));
      config.grid_stop = std::stod(g.substr(c1 + 1, c2 - c1 - 1));
      config.grid_points = static_cast<std::size_t>(std::stoul(g.substr(c2 + 1)));
    } catch (...) {
      throw qtau::ParseError("--eps-grid expects numbers in start:stop:points, got '" + g + "'");
    }
  }
  if (v.state) config.state = *v.state;
  if (v.fidelity) config.fidelity = *v.fidelity;
  if (v.trials) config.trials = *v.trials;
  if (v.seed) config.seed = *v.seed;
  if (v.out) config.out_path = *v.out;
  if (v.family) config.family = *v.family;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tau bound dynamics for bipartite states under one-sided noise"};
  app.require_subcommand(1);

  CliValues tau_v, sweep_v, verify_v, threshold_v;
  CLI::App* cmd_tau = app.add_subcommand("tau", "lower bound of squared concurrence of a state");
  add_common_flags(cmd_tau, tau_v);
  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "tau, bounds and closed form across an eps grid (CSV)");
  add_common_flags(cmd_sweep, sweep_v);
  CLI::App* cmd_verify =
      app.add_subcommand("verify", "run the seeded property campaign (JSON report)");
  add_common_flags(cmd_verify, verify_v);
  CLI::App* cmd_threshold =
      app.add_subcommand("threshold", "analytic and bisected sudden-death points (JSON)");
  add_common_flags(cmd_threshold, threshold_v);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_tau->parsed()) {
      run_tau_command(build_config(tau_v, qtau::Command::kTau), std::cout);
    } else if (cmd_sweep->parsed()) {
      run_sweep_command(build_config(sweep_v, qtau::Command::kSweep), std::cout);
    } else if (cmd_verify->parsed()) {
      const std::size_t failures =
          run_verify_command(build_config(verify_v, qtau::Command::kVerify), std::cout, std::cerr);
      if (failures > 0) {
        std::cerr << failures << " hard check failure(s)\n";
        return 1;
      }
    } else if (cmd_threshold->parsed()) {
      run_threshold_command(build_config(threshold_v, qtau::Command::kThreshold), std::cout);
    }
  } catch (const qtau::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const qtau::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const qtau::InvalidObjectError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
