#include "qtau/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "qtau/errors.hpp"

namespace qtau {

namespace {

constexpr double kRankCutoff = 1e-12;

void require_square_setting(const PureState& psi, const QuantumChannel& ch, const char* who) {
  if (psi.dims().d1 != psi.dims().d2)
    throw InvalidObjectError(std::string(who) + ": needs a d x d bipartite state, got " +
                             std::to_string(psi.dims().d1) + "x" +
                             std::to_string(psi.dims().d2));
  if (psi.dims().d2 != ch.dim())
    throw InvalidObjectError(std::string(who) + ": channel dimension " +
                             std::to_string(ch.dim()) + " does not match state dimension " +
                             std::to_string(psi.dims().d2));
}

/// Detects an isotropic state and returns its fidelity.
std::optional<double> isotropic_fidelity_of(const DensityMatrix& rho) {
  if (rho.dims().d1 != rho.dims().d2) return std::nullopt;
  const std::size_t d = rho.dims().d1;
  const PureState phi = max_entangled(d);
  const ComplexMatrix proj = phi.density_matrix();
  double fidelity = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      fidelity += (proj(i * d + i, j * d + j) * rho.matrix()(j * d + j, i * d + i)).real();
  if (fidelity < 0.0 || fidelity > 1.0) return std::nullopt;
  const DensityMatrix reference = isotropic(d, fidelity);
  if (max_abs_diff(reference.matrix(), rho.matrix()) > 1e-10) return std::nullopt;
  return fidelity;
}

}  // namespace

ChannelFamily channel_family_from_string(const std::string& name) {
  if (name == "depolarizing") return ChannelFamily::kDepolarizing;
  if (name == "phase_damping") return ChannelFamily::kPhaseDamping;
  throw ParseError("unknown channel family '" + name + "'");
}

std::string to_string(ChannelFamily family) {
  return family == ChannelFamily::kDepolarizing ? "depolarizing" : "phase_damping";
}

BoundReport check_pure_bounds(const PureState& psi, const QuantumChannel& ch) {
  require_square_setting(psi, ch, "check_pure_bounds");
  const std::size_t d = ch.dim();
  const double dd = static_cast<double>(d);

  const SchmidtData sd = schmidt(psi);
  const PureState canonical = PureState::from_schmidt_coefficients(sd.coefficients);

  BoundReport report;
  double c2 = 0.0;
  double eta = -1.0;
  for (std::size_t i = 0; i + 1 < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double prod = sd.coefficients[i] * sd.coefficients[j];
      c2 += 4.0 * prod;
      if (prod > kRankCutoff && (eta < 0.0 || prod < eta)) eta = prod;
    }
  report.input_concurrence_sq = c2;
  report.eta = std::max(0.0, eta);

  const ChoiState dual = choi(ch);
  report.choi_tau = tau(dual.state).total;
  report.tau_out = tau(apply_one_sided(ch, density_from_pure(canonical))).total;
  report.upper_bound = dd * dd / 4.0 * report.choi_tau * c2;
  report.lower_bound = 2.0 * dd * report.eta / (dd - 1.0) * report.upper_bound;
  return report;
}

double component_evolution_check(const PureState& psi, const QuantumChannel& ch) {
  require_square_setting(psi, ch, "component_evolution_check");
  const std::size_t d = ch.dim();
  const double dd = static_cast<double>(d);

  const SchmidtData sd = schmidt(psi);
  const PureState canonical = PureState::from_schmidt_coefficients(sd.coefficients);
  const DensityMatrix out = apply_one_sided(ch, density_from_pure(canonical));
  const ChoiState dual = choi(ch);

  double worst = 0.0;
  for (const ComponentIndex& idx : component_indices(out.dims())) {
    const double lhs_c = component_concurrence(out, idx);
    const double dual_c = component_concurrence(dual.state, idx);
    const double rhs =
        dd * dd * sd.coefficients[idx.p] * sd.coefficients[idx.r] * dual_c * dual_c;
    worst = std::max(worst, std::abs(lhs_c * lhs_c - rhs));
  }
  return worst;
}

MixedBoundReport check_mixed_bound(const DensityMatrix& rho0, const QuantumChannel& ch,
                                   double tangle0, bool tangle0_exact) {
  if (rho0.dims().d1 != rho0.dims().d2 || rho0.dims().d2 != ch.dim())
    throw InvalidObjectError("check_mixed_bound: needs a d x d state matching the channel");
  const double dd = static_cast<double>(ch.dim());

  MixedBoundReport report;
  report.tau_out = tau(apply_one_sided(ch, rho0)).total;
  report.bound = dd * dd / 4.0 * tau(choi(ch).state).total * tangle0;
  report.violated = report.tau_out > report.bound + 1e-8;
  if (report.violated && tangle0_exact)
    throw InvariantViolation("check_mixed_bound: tau(out) " + std::to_string(report.tau_out) +
                             " exceeds bound " + std::to_string(report.bound) +
                             " with an exact tangle");
  return report;
}

TangleDynamicsReport tangle_dynamics_check(const DensityMatrix& rho0, const QuantumChannel& ch,
                                           std::size_t trials, std::uint64_t seed) {
  if (rho0.dims().d1 != rho0.dims().d2 || rho0.dims().d2 != ch.dim())
    throw InvalidObjectError("tangle_dynamics_check: needs a d x d state matching the channel");
  const double dd = static_cast<double>(ch.dim());

  // Exact tangles where they exist: any 2x2 state (tau is the squared
  // concurrence there, and the two-qubit tangle equals it) and isotropic
  // states; otherwise the Monte Carlo upper estimate.
  auto tangle_of = [&](const DensityMatrix& rho, std::uint64_t stream,
                       bool& exact) -> double {
    if (rho.dims().d1 == 2 && rho.dims().d2 == 2) {
      exact = true;
      return tau(rho).total;
    }
    if (const auto fidelity = isotropic_fidelity_of(rho)) {
      exact = true;
      return isotropic_tau(rho.dims().d1, *fidelity);
    }
    exact = false;
    return tangle_upper_estimate(rho, trials, seed ^ (0x9e37ULL * (stream + 1)));
  };

  TangleDynamicsReport report;
  bool exact_out = false, exact_dual = false, exact_in = false;
  const DensityMatrix out = apply_one_sided(ch, rho0);
  report.estimate_out = tangle_of(out, 0, exact_out);
  const double dual_tangle = tangle_of(choi(ch).state, 1, exact_dual);
  const double input_tangle = tangle_of(rho0, 2, exact_in);
  report.bound = dd * dd / 4.0 * dual_tangle * input_tangle;
  report.exact = exact_out && exact_dual && exact_in;
  return report;
}

double closed_form_tau(ChannelFamily family, const std::vector<double>& omega, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw InvalidObjectError("closed_form_tau: eps " + std::to_string(eps) + " outside [0,1]");
  const double dd = static_cast<double>(omega.size());
  const double factor = family == ChannelFamily::kDepolarizing
                            ? (2.0 * dd - (2.0 * dd + 2.0) * eps) / dd
                            : 2.0 * (1.0 - eps);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < omega.size(); ++i)
    for (std::size_t j = i + 1; j < omega.size(); ++j) {
      const double x = std::max(0.0, factor * std::sqrt(omega[i] * omega[j]));
      total += x * x;
    }
  return total;
}

double isotropic_depolarizing_tau(std::size_t d, double fidelity, double eps) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0))
    throw InvalidObjectError("isotropic_depolarizing_tau: fidelity outside [0,1]");
  if (!(eps >= 0.0 && eps <= 1.0))
    throw InvalidObjectError("isotropic_depolarizing_tau: eps outside [0,1]");
  const double dd = static_cast<double>(d);
  const double arg = fidelity - 1.0 / dd - (fidelity * dd * dd - 1.0) / (dd * dd) * eps;
  const double clipped = std::max(0.0, arg);
  return 2.0 * dd / (dd - 1.0) * clipped * clipped;
}

SuddenDeathFamily sudden_death_family_from_string(const std::string& name) {
  if (name == "depolarizing_pure") return SuddenDeathFamily::kDepolarizingPure;
  if (name == "depolarizing_isotropic") return SuddenDeathFamily::kDepolarizingIsotropic;
  if (name == "phase_damping_pure") return SuddenDeathFamily::kPhaseDampingPure;
  throw ParseError("unknown sudden-death family '" + name + "'");
}

std::optional<double> sudden_death_threshold(SuddenDeathFamily family, std::size_t d,
                                             std::optional<double> fidelity) {
  const double dd = static_cast<double>(d);
  switch (family) {
    case SuddenDeathFamily::kDepolarizingPure:
      return dd / (dd + 1.0);
    case SuddenDeathFamily::kDepolarizingIsotropic: {
      if (!fidelity)
        throw InvalidObjectError("sudden_death_threshold: isotropic family needs a fidelity");
      if (*fidelity <= 1.0 / dd)
        throw InvalidObjectError("sudden_death_threshold: fidelity " +
                                 std::to_string(*fidelity) + " <= 1/d carries no tau");
      return (*fidelity * dd * dd - dd) / (*fidelity * dd * dd - 1.0);
    }
    case SuddenDeathFamily::kPhaseDampingPure:
      return std::nullopt;
  }
  throw InvalidObjectError("sudden_death_threshold: unknown family");
}

std::vector<double> eps_grid(double start, double stop, std::size_t points) {
  if (!(start >= 0.0 && stop <= 1.0 && start < stop) || points < 2)
    throw InvalidObjectError("eps_grid: need 0 <= start < stop <= 1 and at least 2 points");
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k)
    grid[k] = start + (stop - start) * static_cast<double>(k) / static_cast<double>(points - 1);
  return grid;
}

namespace {

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw InvalidObjectError("sweep: empty eps grid");
  double prev = -1.0;
  for (double e : grid) {
    if (!(e >= 0.0 && e <= 1.0)) throw InvalidObjectError("sweep: eps outside [0,1]");
    if (e <= prev) throw InvalidObjectError("sweep: eps grid must increase strictly");
    prev = e;
  }
}

QuantumChannel make_family_channel(ChannelFamily family, std::size_t d, double eps) {
  return family == ChannelFamily::kDepolarizing ? depolarizing(d, eps) : phase_damping(d, eps);
}

}  // namespace

SweepResult sweep_pure(const PureState& psi, ChannelFamily family,
                       const std::vector<double>& grid) {
  check_grid(grid);
  if (psi.dims().d1 != psi.dims().d2)
    throw InvalidObjectError("sweep_pure: needs a d x d state");
  const std::size_t d = psi.dims().d1;
  const SchmidtData sd = schmidt(psi);

  SweepResult result;
  result.rows.reserve(grid.size());
  for (double eps : grid) {
    const QuantumChannel ch = make_family_channel(family, d, eps);
    const BoundReport report = check_pure_bounds(psi, ch);
    SweepRow row;
    row.eps = eps;
    row.tau = report.tau_out;
    row.upper = report.upper_bound;
    row.lower = report.lower_bound;
    row.closed_form = closed_form_tau(family, sd.coefficients, eps);
    result.rows.push_back(row);
  }
  return result;
}

SweepResult sweep_mixed(const DensityMatrix& rho0, ChannelFamily family,
                        const std::vector<double>& grid, std::optional<double> exact_tangle,
                        std::optional<double> isotropic_fidelity) {
  check_grid(grid);
  if (rho0.dims().d1 != rho0.dims().d2)
    throw InvalidObjectError("sweep_mixed: needs a d x d state");
  const std::size_t d = rho0.dims().d1;
  const double dd = static_cast<double>(d);

  std::optional<double> fidelity = isotropic_fidelity;
  if (!fidelity) fidelity = isotropic_fidelity_of(rho0);
  std::optional<double> tangle = exact_tangle;
  if (!tangle && fidelity) tangle = isotropic_tau(d, *fidelity);

  SweepResult result;
  result.rows.reserve(grid.size());
  for (double eps : grid) {
    const QuantumChannel ch = make_family_channel(family, d, eps);
    SweepRow row;
    row.eps = eps;
    row.tau = tau(apply_one_sided(ch, rho0)).total;
    if (tangle) row.upper = dd * dd / 4.0 * tau(choi(ch).state).total * *tangle;
    if (fidelity && family == ChannelFamily::kDepolarizing)
      row.closed_form = isotropic_depolarizing_tau(d, *fidelity, eps);
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace qtau
