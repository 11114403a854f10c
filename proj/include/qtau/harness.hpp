#ifndef QTAU_HARNESS_HPP
#define QTAU_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtau/dynamics.hpp"
#include "qtau/serialization.hpp"

namespace qtau {

enum class Command { kTau, kSweep, kVerify, kThreshold };

/// Everything a run needs; flags override config-file values, config-file
/// values override these defaults.
struct RunConfig {
  Command command = Command::kTau;
  std::size_t d = 3;
  std::string channel = "depolarizing";  // depolarizing | phase_damping | kraus:<path>
  std::optional<double> eps;
  double grid_start = 0.0;
  double grid_stop = 1.0;
  std::size_t grid_points = 101;
  // maxent | schmidt:w0,w1,... | isotropic | werner:<mu> | random:<rank> | file:<path>
  std::string state = "maxent";
  std::optional<double> fidelity;
  std::size_t trials = 1000;
  std::uint64_t seed = 42;
  std::string out_path;  // empty -> stdout
  std::string family = "depolarizing_pure";
};

/// Applies the keys of a JSON config object onto `config` (unknown keys are
/// an error; the command itself cannot be set from a file).
void apply_config_json(const nlohmann::json& j, RunConfig& config);

/// A state parsed from a state spec: exactly one member is set.
struct ResolvedState {
  std::optional<PureState> pure;
  std::optional<DensityMatrix> density;

  DensityMatrix as_density() const;
};

ResolvedState resolve_state(const RunConfig& config);
QuantumChannel resolve_channel(const RunConfig& config, double eps);

/// One verification check: `cases` ran, `failures` crossed the hard
/// tolerance, `max_deviation` is the worst observed distance from the
/// asserted relation. Soft checks never fail a run.
struct CheckResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double max_deviation = 0.0;
  bool hard = true;
};

struct CampaignReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::vector<CheckResult> checks;
  double wall_clock_seconds = 0.0;  // logged to stderr, kept out of the JSON

  std::size_t hard_failures() const;
};

/// The full property campaign across d in {2,3,4}; trial counts scale with
/// `trials`. Independent cases are distributed across worker threads; the
/// aggregation (counts and max-reductions) is order-independent, so the
/// report is deterministic for a fixed seed.
CampaignReport run_campaign(std::size_t trials, std::uint64_t seed);

/// JSON view of a report; excludes wall-clock so repeated runs are
/// byte-identical.
nlohmann::json to_json(const CampaignReport& report);

// Command drivers: write their artifact to config.out_path (or `out`) and
// throw qtau errors on bad input. run_verify returns the number of hard
// failures.
void run_tau_command(const RunConfig& config, std::ostream& out);
void run_sweep_command(const RunConfig& config, std::ostream& out);
std::size_t run_verify_command(const RunConfig& config, std::ostream& out, std::ostream& log);
void run_threshold_command(const RunConfig& config, std::ostream& out);

/// Smallest eps in [0,1] where the closed-form tau drops below 1e-12,
/// located by bisection (1.0 when tau only dies at the endpoint).
double numeric_death_point(SuddenDeathFamily family, std::size_t d,
                           std::optional<double> fidelity);

/// Two-qubit concurrence by the spin-flip formula, used by the campaign's
/// factorization checks.
double wootters_concurrence(const ComplexMatrix& rho4);

}  // namespace qtau

#endif
