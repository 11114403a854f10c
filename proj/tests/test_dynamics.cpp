#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qtau/dynamics.hpp"
#include "qtau/errors.hpp"
#include "qtau/harness.hpp"
#include "qtau/serialization.hpp"
#include "support/oracles.hpp"

using namespace qtau;
using namespace qtau::testing;

namespace {

const std::vector<double> kFigOmega = {1.0 / 6, 1.0 / 6, 2.0 / 3};

PureState fig_state() { return PureState::from_schmidt_coefficients(kFigOmega); }

}  // namespace

TEST_CASE("check_pure_bounds: maximally entangled input saturates the lower bound") {
  for (std::size_t d : {2ul, 3ul}) {
    for (double eps : {0.1, 0.4, 0.7}) {
      const BoundReport rep = check_pure_bounds(max_entangled(d), depolarizing(d, eps));
      // The output is the dual state itself, and eta = 1/d^2 makes the
      // lower factor exactly one.
      CHECK(rep.tau_out == doctest::Approx(rep.choi_tau).epsilon(1e-9));
      CHECK(rep.lower_bound == doctest::Approx(rep.tau_out).epsilon(1e-9));
      CHECK(rep.tau_out <= rep.upper_bound + 1e-12);
      CHECK(rep.eta == doctest::Approx(1.0 / static_cast<double>(d * d)).epsilon(1e-10));
    }
  }
}

TEST_CASE("check_pure_bounds: frozen Fig-1 depolarizing point") {
  const BoundReport rep = check_pure_bounds(fig_state(), depolarizing(3, 0.3));
  // x_ij = (6 - 8 eps)/3 sqrt(w_i w_j): sum of squares = 1.44 * 1/4.
  CHECK(rep.tau_out == doctest::Approx(0.36).epsilon(1e-10));
  CHECK(rep.input_concurrence_sq == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.choi_tau == doctest::Approx(0.48).epsilon(1e-10));
  CHECK(rep.upper_bound == doctest::Approx(1.08).epsilon(1e-10));
  CHECK(rep.eta == doctest::Approx(1.0 / 36.0).epsilon(1e-12));
  CHECK(rep.lower_bound == doctest::Approx(0.09).epsilon(1e-10));
}

TEST_CASE("check_pure_bounds: d=2 factorization is an equality") {
  Rng rng(1201);
  for (int t = 0; t < 200; ++t) {
    const PureState psi = haar_random_pure(BipartiteDims{2, 2}, rng);
    const QuantumChannel ch = random_channel(2, 1 + rng.below(4), rng);
    const BoundReport rep = check_pure_bounds(psi, ch);
    CHECK(std::abs(rep.tau_out - rep.choi_tau * rep.input_concurrence_sq) < 1e-9);
  }
}

TEST_CASE("check_pure_bounds: sandwich holds for full-rank random inputs at d=3") {
  Rng rng(1202);
  for (int t = 0; t < 200; ++t) {
    const PureState psi = haar_random_pure(BipartiteDims{3, 3}, rng);
    const BoundReport rep = check_pure_bounds(psi, random_channel(3, 1 + rng.below(9), rng));
    CHECK(rep.tau_out <= rep.upper_bound + 1e-8);
    CHECK(rep.tau_out >= rep.lower_bound - 1e-8);
  }
}

// The printed lower-bound factor multiplies the full dual-state tau, so it
// is a guarantee only when every Schmidt pair is populated. A rank-2 state
// in d=3 overshoots it; this locks the known caveat in place.
TEST_CASE("check_pure_bounds: rank-deficient inputs void the lower bound, not the upper") {
  const PureState rank2 = PureState::from_schmidt_coefficients({0.5, 0.5, 0.0});
  const BoundReport rep = check_pure_bounds(rank2, depolarizing(3, 0.0));
  CHECK(rep.tau_out == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.tau_out <= rep.upper_bound + 1e-12);
  CHECK(rep.lower_bound > rep.tau_out);  // 2.25 vs 1: the printed factor needs full rank

  std::vector<Complex> prod(9, Complex(0.0, 0.0));
  prod[0] = 1.0;
  const BoundReport product_rep =
      check_pure_bounds(PureState::make(BipartiteDims{3, 3}, prod), depolarizing(3, 0.2));
  CHECK(product_rep.eta == 0.0);
  CHECK(product_rep.lower_bound == 0.0);
  CHECK(product_rep.tau_out == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("check_pure_bounds: dimension mismatches are rejected") {
  CHECK_THROWS_AS(check_pure_bounds(max_entangled(3), depolarizing(2, 0.1)),
                  InvalidObjectError);
  const PureState rect = haar_random_pure(BipartiteDims{2, 3}, 7);
  CHECK_THROWS_AS(check_pure_bounds(rect, depolarizing(3, 0.1)), InvalidObjectError);
}

TEST_CASE("component_evolution_check: identity, built-ins, random channels") {
  CHECK(component_evolution_check(fig_state(), phase_damping(3, 0.0)) < 1e-9);
  CHECK(component_evolution_check(fig_state(), depolarizing(3, 0.3)) < 1e-8);
  CHECK(component_evolution_check(fig_state(), phase_damping(3, 0.5)) < 1e-8);

  Rng rng(1203);
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 2 + t % 3;
    const PureState psi = haar_random_pure(BipartiteDims{d, d}, rng);
    CHECK(component_evolution_check(psi, random_channel(d, 1 + rng.below(d * d), rng)) < 1e-8);
  }
}

TEST_CASE("check_mixed_bound: pure input reduces to the pure-state upper bound") {
  Rng rng(1204);
  for (int t = 0; t < 50; ++t) {
    const PureState psi = haar_random_pure(BipartiteDims{3, 3}, rng);
    const QuantumChannel ch = random_channel(3, 1 + rng.below(4), rng);
    const double c = pure_concurrence(psi);
    const BoundReport pure_rep = check_pure_bounds(psi, ch);
    // Evolve the same canonical form the pure-state report uses.
    const PureState canon = PureState::from_schmidt_coefficients(schmidt(psi).coefficients);
    const MixedBoundReport rep = check_mixed_bound(density_from_pure(canon), ch, c * c);
    CHECK(std::abs(rep.bound - pure_rep.upper_bound) < 1e-10);
    CHECK_FALSE(rep.violated);
  }
}

TEST_CASE("check_mixed_bound: frozen isotropic point and the exact-tangle throw") {
  // F = 8/9, eps = 0.2: the output is isotropic with
  // F' = F - (9F-1)/9 * eps, so tau(out) = 3 (5/9 - 7/9 * 0.2)^2 = 0.48.
  const MixedBoundReport rep =
      check_mixed_bound(isotropic(3, 8.0 / 9.0), depolarizing(3, 0.2), isotropic_tau(3, 8.0 / 9.0));
  CHECK(rep.tau_out == doctest::Approx(0.48).epsilon(1e-10));
  CHECK_FALSE(rep.violated);
  CHECK(rep.tau_out <= rep.bound + 1e-8);

  // A deliberately false "exact" tangle of zero must trip the hard check.
  CHECK_THROWS_AS(
      check_mixed_bound(isotropic(3, 8.0 / 9.0), depolarizing(3, 0.1), 0.0, true),
      InvariantViolation);
  // The same lie flagged as an estimate is only reported.
  const MixedBoundReport soft =
      check_mixed_bound(isotropic(3, 8.0 / 9.0), depolarizing(3, 0.1), 0.0, false);
  CHECK(soft.violated);
}

TEST_CASE("check_mixed_bound: isotropic grid has no violations") {
  for (double f : {0.4, 0.55, 0.7, 0.85, 1.0}) {
    for (int k = 0; k <= 20; ++k) {
      const double eps = k / 20.0;
      const MixedBoundReport rep =
          check_mixed_bound(isotropic(3, f), depolarizing(3, eps), isotropic_tau(3, f));
      CHECK_FALSE(rep.violated);
    }
  }
}

TEST_CASE("tangle_dynamics_check: exact for two qubits, squares the factorization law") {
  Rng rng(1205);
  for (int t = 0; t < 120; ++t) {
    const DensityMatrix rho = random_mixed(BipartiteDims{2, 2}, 1 + t % 4, rng);
    const TangleDynamicsReport rep =
        tangle_dynamics_check(rho, random_channel(2, 1 + rng.below(4), rng), 30, rng.next_u64());
    CHECK(rep.exact);
    CHECK(rep.holds(1e-8));
  }
}

TEST_CASE("tangle_dynamics_check: isotropic inputs are recognized as analytic") {
  const TangleDynamicsReport rep =
      tangle_dynamics_check(isotropic(3, 0.8), depolarizing(3, 0.25), 10, 5);
  CHECK(rep.exact);  // input, dual state and output are all isotropic here
  CHECK(rep.holds(1e-8));
}

TEST_CASE("tangle_dynamics_check: estimate mode reports without asserting") {
  Rng rng(1206);
  std::size_t violations = 0;
  for (int t = 0; t < 25; ++t) {
    const DensityMatrix rho = random_mixed(BipartiteDims{3, 3}, 2, rng);
    const TangleDynamicsReport rep =
        tangle_dynamics_check(rho, random_channel(3, 1 + rng.below(4), rng), 100, rng.next_u64());
    CHECK_FALSE(rep.exact);
    CHECK(rep.estimate_out >= 0.0);
    CHECK(rep.bound >= 0.0);
    if (!rep.holds(1e-8)) ++violations;
  }
  // Estimator slack can produce apparent violations; they are data, not
  // failures. Nothing to assert beyond bookkeeping sanity.
  CHECK(violations <= 25);
}

TEST_CASE("closed_form_tau: eps=0 gives the squared concurrence, frozen mid-points") {
  for (const auto family : {ChannelFamily::kDepolarizing, ChannelFamily::kPhaseDamping}) {
    CHECK(closed_form_tau(family, kFigOmega, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(closed_form_tau(ChannelFamily::kDepolarizing, kFigOmega, 0.3) ==
        doctest::Approx(0.36).epsilon(1e-12));
  CHECK(closed_form_tau(ChannelFamily::kPhaseDamping, kFigOmega, 0.5) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(closed_form_tau(ChannelFamily::kDepolarizing, kFigOmega, 1.2),
                  InvalidObjectError);
  CHECK_THROWS_AS(channel_family_from_string("amplitude_damping"), ParseError);
}

TEST_CASE("sudden_death_threshold: frozen values, missing-fidelity and range errors") {
  CHECK(*sudden_death_threshold(SuddenDeathFamily::kDepolarizingPure, 3) ==
        doctest::Approx(0.75).epsilon(1e-15));
  CHECK(*sudden_death_threshold(SuddenDeathFamily::kDepolarizingPure, 2) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(*sudden_death_threshold(SuddenDeathFamily::kDepolarizingIsotropic, 3, 8.0 / 9.0) ==
        doctest::Approx(5.0 / 7.0).epsilon(1e-15));
  CHECK(*sudden_death_threshold(SuddenDeathFamily::kDepolarizingIsotropic, 3, 2.0 / 3.0) ==
        doctest::Approx(0.6).epsilon(1e-15));
  CHECK_FALSE(sudden_death_threshold(SuddenDeathFamily::kPhaseDampingPure, 5).has_value());
  CHECK_THROWS_AS(sudden_death_threshold(SuddenDeathFamily::kDepolarizingIsotropic, 3, 0.3),
                  InvalidObjectError);
  CHECK_THROWS_AS(sudden_death_threshold(SuddenDeathFamily::kDepolarizingIsotropic, 3),
                  InvalidObjectError);
}

TEST_CASE("numeric_death_point: bisection matches the analytic thresholds") {
  for (std::size_t d : {2ul, 3ul, 4ul}) {
    CHECK(std::abs(numeric_death_point(SuddenDeathFamily::kDepolarizingPure, d, {}) -
                   *sudden_death_threshold(SuddenDeathFamily::kDepolarizingPure, d)) < 1e-9);
  }
  for (double f : {0.5, 2.0 / 3.0, 0.8, 8.0 / 9.0}) {
    CHECK(std::abs(numeric_death_point(SuddenDeathFamily::kDepolarizingIsotropic, 3, f) -
                   *sudden_death_threshold(SuddenDeathFamily::kDepolarizingIsotropic, 3, f)) <
          1e-9);
  }
  CHECK(numeric_death_point(SuddenDeathFamily::kPhaseDampingPure, 3, {}) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sweep_pure: Fig-1(a) depolarizing decay with sudden death at 0.75") {
  const SweepResult sweep = sweep_pure(fig_state(), ChannelFamily::kDepolarizing,
                                       eps_grid(0.0, 1.0, 101));
  REQUIRE(sweep.rows.size() == 101);
  CHECK(sweep.rows.front().tau == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t k = 0; k < sweep.rows.size(); ++k) {
    const SweepRow& row = sweep.rows[k];
    REQUIRE(row.closed_form.has_value());
    REQUIRE(row.upper.has_value());
    REQUIRE(row.lower.has_value());
    CHECK(std::abs(row.tau - *row.closed_form) < 1e-8);
    if (row.eps >= 0.75) CHECK(row.tau < 1e-12);
    if (k > 0) CHECK(row.tau <= sweep.rows[k - 1].tau + 1e-10);
    CHECK(row.tau <= *row.upper + 1e-8);
    CHECK(row.tau >= *row.lower - 1e-8);
  }
}

TEST_CASE("sweep_pure: Fig-1(b) phase damping decays as (1-eps)^2, no sudden death") {
  const SweepResult sweep = sweep_pure(fig_state(), ChannelFamily::kPhaseDamping,
                                       eps_grid(0.0, 1.0, 101));
  for (const SweepRow& row : sweep.rows) {
    CHECK(std::abs(row.tau - (1.0 - row.eps) * (1.0 - row.eps)) < 1e-8);
    if (row.eps < 1.0) CHECK(row.tau > 0.0);
  }
}

TEST_CASE("sweep_mixed: Fig-2 isotropic decay and death points") {
  const SweepResult f23 = sweep_mixed(isotropic(3, 2.0 / 3.0), ChannelFamily::kDepolarizing,
                                      eps_grid(0.0, 1.0, 101));
  CHECK(f23.rows.front().tau == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  for (const SweepRow& row : f23.rows) {
    REQUIRE(row.closed_form.has_value());
    REQUIRE(row.upper.has_value());
    CHECK_FALSE(row.lower.has_value());
    CHECK(std::abs(row.tau - *row.closed_form) < 1e-8);
    if (row.eps >= 0.6) CHECK(row.tau < 1e-12);
    if (row.eps <= 0.59) CHECK(row.tau > 1e-12);
  }

  const SweepResult f89 = sweep_mixed(isotropic(3, 8.0 / 9.0), ChannelFamily::kDepolarizing,
                                      eps_grid(0.0, 1.0, 101));
  CHECK(f89.rows.front().tau == doctest::Approx(25.0 / 27.0).epsilon(1e-9));
  const double death = 5.0 / 7.0;
  for (const SweepRow& row : f89.rows) {
    CHECK(std::abs(row.tau - *row.closed_form) < 1e-8);
    if (row.eps >= death) CHECK(row.tau < 1e-12);
    if (row.eps <= death - 0.01) CHECK(row.tau > 1e-12);
  }
}

TEST_CASE("sweep_mixed: Werner input under phase damping shows sudden death") {
  // Submatrix arithmetic gives tau(eps) = 12 max{0, (1-eps) mu - (1-mu)}^2
  // / (9 - 3 mu)^2 for the d=3 Werner family, dying at eps = 2 - 1/mu < 1.
  for (double mu : {0.7, 0.85}) {
    const SweepResult sweep =
        sweep_mixed(werner(3, mu), ChannelFamily::kPhaseDamping, eps_grid(0.0, 1.0, 101));
    const double death = 2.0 - 1.0 / mu;
    for (const SweepRow& row : sweep.rows) {
      CHECK_FALSE(row.closed_form.has_value());
      CHECK_FALSE(row.upper.has_value());
      const double expected =
          12.0 * std::pow(std::max(0.0, (1.0 - row.eps) * mu - (1.0 - mu)), 2.0) /
          std::pow(9.0 - 3.0 * mu, 2.0);
      CHECK(std::abs(row.tau - expected) < 1e-9);
      if (row.eps > death + 0.01) CHECK(row.tau < 1e-12);
    }
    CHECK(sweep.rows.front().tau > 0.0);
  }
}

TEST_CASE("eps_grid and sweep input validation") {
  CHECK_THROWS_AS(eps_grid(0.0, 1.0, 1), InvalidObjectError);
  CHECK_THROWS_AS(eps_grid(-0.1, 1.0, 11), InvalidObjectError);
  CHECK_THROWS_AS(eps_grid(0.8, 0.2, 11), InvalidObjectError);
  CHECK_THROWS_AS(sweep_pure(fig_state(), ChannelFamily::kDepolarizing, {}),
                  InvalidObjectError);
  CHECK_THROWS_AS(sweep_pure(fig_state(), ChannelFamily::kDepolarizing, {0.5, 0.5}),
                  InvalidObjectError);
}

TEST_CASE("sweep CSV: header, full precision, empty lower column for mixed inputs") {
  const SweepResult sweep = sweep_mixed(isotropic(3, 2.0 / 3.0), ChannelFamily::kDepolarizing,
                                        eps_grid(0.0, 1.0, 3));
  const std::string csv = to_csv(sweep);
  CHECK(csv.rfind("eps,tau,upper,lower,closed_form\n", 0) == 0);
  // 17 significant digits round-trip the doubles exactly.
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  const std::string tau_token = line.substr(line.find(',') + 1, std::string::npos);
  CHECK(std::stod(tau_token) == sweep.rows.front().tau);
  // A mixed-input row keeps the lower field empty: ",,"
  CHECK(csv.find(",,") != std::string::npos);
}
