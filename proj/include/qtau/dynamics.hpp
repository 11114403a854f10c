#ifndef QTAU_DYNAMICS_HPP
#define QTAU_DYNAMICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "qtau/bounds.hpp"
#include "qtau/channels.hpp"
#include "qtau/states.hpp"

namespace qtau {

enum class ChannelFamily { kDepolarizing, kPhaseDamping };

ChannelFamily channel_family_from_string(const std::string& name);
std::string to_string(ChannelFamily family);

/// Range of tau after a pure state runs through a one-sided channel:
/// tau_out sits between the eta-weighted lower bound and the
/// (d^2/4) tau(dual state) C^2(input) upper bound.
struct BoundReport {
  double tau_out = 0.0;
  double upper_bound = 0.0;
  double lower_bound = 0.0;
  double eta = 0.0;  // min w_p w_r over populated Schmidt pairs (0 if none)
  double choi_tau = 0.0;
  double input_concurrence_sq = 0.0;
};

/// Evaluates both factorization bounds for a pure input. The input is
/// reduced to its Schmidt canonical form sum_i sqrt(w_i)|ii> first; the
/// component quantities live in that basis. The lower bound uses the
/// printed (full dual-state tau) factor, which is only a guarantee when
/// every Schmidt pair is populated, i.e. for full-Schmidt-rank inputs.
BoundReport check_pure_bounds(const PureState& psi, const QuantumChannel& ch);

/// Verifies the per-component evolution law
///   C^2_idx(out) = d^2 w_p w_r C^2_idx(dual state)
/// in the Schmidt basis of the input; returns the largest absolute
/// deviation across components.
double component_evolution_check(const PureState& psi, const QuantumChannel& ch);

struct MixedBoundReport {
  double tau_out = 0.0;
  double bound = 0.0;  // (d^2/4) tau(dual state) * tangle0
  bool violated = false;
};

/// Mixed-input bound: tau(out) <= (d^2/4) tau(dual state) tangle(rho0).
/// With `tangle0_exact` set (an analytic tangle), a violation beyond 1e-8
/// throws; with an upper estimate it is only reported.
MixedBoundReport check_mixed_bound(const DensityMatrix& rho0, const QuantumChannel& ch,
                                   double tangle0, bool tangle0_exact = true);

struct TangleDynamicsReport {
  double estimate_out = 0.0;
  double bound = 0.0;
  bool exact = false;  // both tangles analytic (d=2 or isotropic inputs)
  bool holds(double slack = 1e-8) const { return estimate_out <= bound + slack; }
};

/// Tangle analogue of the mixed bound. Exact tangles are used where they
/// exist (every 2x2 state via tau, isotropic states); everything else falls
/// back to the Monte Carlo upper estimate, making the check soft.
TangleDynamicsReport tangle_dynamics_check(const DensityMatrix& rho0, const QuantumChannel& ch,
                                           std::size_t trials, std::uint64_t seed = 1234);

/// Closed-form tau((1 (x) E)|psi>) for the built-in families, from the
/// Schmidt coefficients of the input:
///   depolarizing:  sum_{i<j} max{0, (2d - (2d+2) eps)/d sqrt(w_i w_j)}^2
///   phase damping: sum_{i<j} max{0, 2 (1-eps) sqrt(w_i w_j)}^2
double closed_form_tau(ChannelFamily family, const std::vector<double>& omega, double eps);

/// Closed-form tau for an isotropic input under depolarizing noise:
/// (2d/(d-1)) max{0, F - 1/d - (F d^2 - 1) eps / d^2}^2.
double isotropic_depolarizing_tau(std::size_t d, double fidelity, double eps);

enum class SuddenDeathFamily { kDepolarizingPure, kDepolarizingIsotropic, kPhaseDampingPure };

SuddenDeathFamily sudden_death_family_from_string(const std::string& name);

/// Smallest eps at which tau hits zero, when that happens before eps = 1:
///   depolarizing, pure input:       d / (d+1)
///   depolarizing, isotropic input:  (F d^2 - d) / (F d^2 - 1), needs F > 1/d
///   phase damping, pure input:      none (tau vanishes only at eps = 1)
std::optional<double> sudden_death_threshold(SuddenDeathFamily family, std::size_t d,
                                             std::optional<double> fidelity = std::nullopt);

struct SweepRow {
  double eps = 0.0;
  double tau = 0.0;
  std::optional<double> upper;
  std::optional<double> lower;
  std::optional<double> closed_form;
};

struct SweepResult {
  std::string parameter = "eps";
  std::vector<SweepRow> rows;
};

/// Evenly spaced grid over [start, stop] with `points` entries.
std::vector<double> eps_grid(double start, double stop, std::size_t points);

/// Generic-pipeline tau across an eps grid for a pure input. Upper/lower
/// come from check_pure_bounds, closed_form from the family formula.
SweepResult sweep_pure(const PureState& psi, ChannelFamily family, const std::vector<double>& grid);

/// Same for a mixed input: tau always, the tangle-weighted upper bound when
/// an exact tangle is supplied, the closed form for isotropic inputs under
/// depolarizing noise. `lower` stays empty.
SweepResult sweep_mixed(const DensityMatrix& rho0, ChannelFamily family,
                        const std::vector<double>& grid,
                        std::optional<double> exact_tangle = std::nullopt,
                        std::optional<double> isotropic_fidelity = std::nullopt);

}  // namespace qtau

#endif
