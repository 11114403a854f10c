// Acceptance suite: the reproduction and verification gates this project
// must clear, one test case per criterion, each printing a pass/fail line.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qtau/harness.hpp"
#include "support/oracles.hpp"

using namespace qtau;
using namespace qtau::testing;

namespace {

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[criterion %2d] %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

const std::vector<double> kFigOmega = {1.0 / 6, 1.0 / 6, 2.0 / 3};

}  // namespace

TEST_CASE("criterion 1: Fig 1(a) depolarizing reproduction") {
  Stopwatch timer;
  const PureState psi = PureState::from_schmidt_coefficients(kFigOmega);
  const SweepResult sweep =
      sweep_pure(psi, ChannelFamily::kDepolarizing, eps_grid(0.0, 1.0, 101));

  double worst_closed_form = 0.0;
  bool dead_past_threshold = true;
  bool monotone = true;
  for (std::size_t k = 0; k < sweep.rows.size(); ++k) {
    const SweepRow& row = sweep.rows[k];
    const double closed =
        closed_form_tau(ChannelFamily::kDepolarizing, kFigOmega, row.eps);
    worst_closed_form = std::max(worst_closed_form, std::abs(row.tau - closed));
    if (row.eps >= 0.75 && !(row.tau < 1e-12)) dead_past_threshold = false;
    if (k > 0 && row.tau > sweep.rows[k - 1].tau + 1e-10) monotone = false;
  }
  const double tau0_err = std::abs(sweep.rows.front().tau - 1.0);
  const double elapsed = timer.seconds();

  const bool pass = worst_closed_form <= 1e-8 && tau0_err <= 1e-9 && dead_past_threshold &&
                    monotone && elapsed < 10.0;
  std::ostringstream detail;
  detail << "closed-form dev " << worst_closed_form << ", tau(0) err " << tau0_err
         << ", death at 0.75 " << (dead_past_threshold ? "ok" : "BROKEN") << ", "
         << elapsed << " s";
  report(1, pass, detail.str());
  CHECK(worst_closed_form <= 1e-8);
  CHECK(tau0_err <= 1e-9);
  CHECK(dead_past_threshold);
  CHECK(monotone);
  CHECK(elapsed < 10.0);
}

TEST_CASE("criterion 2: Fig 1(b) phase damping reproduction") {
  const PureState psi = PureState::from_schmidt_coefficients(kFigOmega);
  const SweepResult sweep =
      sweep_pure(psi, ChannelFamily::kPhaseDamping, eps_grid(0.0, 1.0, 101));
  double worst = 0.0;
  bool alive_below_one = true;
  for (const SweepRow& row : sweep.rows) {
    worst = std::max(worst, std::abs(row.tau - (1.0 - row.eps) * (1.0 - row.eps)));
    if (row.eps < 1.0 && !(row.tau > 0.0)) alive_below_one = false;
  }
  const bool pass = worst <= 1e-8 && alive_below_one;
  std::ostringstream detail;
  detail << "(1-eps)^2 dev " << worst << ", positive below eps=1 "
         << (alive_below_one ? "ok" : "BROKEN");
  report(2, pass, detail.str());
  CHECK(worst <= 1e-8);
  CHECK(alive_below_one);
}

TEST_CASE("criterion 3: Fig 2 isotropic reproduction") {
  bool pass = true;
  std::ostringstream detail;
  const struct {
    double fidelity;
    double tau0;
    double death;
  } cases[2] = {{2.0 / 3.0, 1.0 / 3.0, 0.6}, {8.0 / 9.0, 25.0 / 27.0, 5.0 / 7.0}};

  for (const auto& c : cases) {
    const SweepResult sweep = sweep_mixed(isotropic(3, c.fidelity),
                                          ChannelFamily::kDepolarizing, eps_grid(0.0, 1.0, 101));
    double worst = 0.0;
    bool death_ok = true;
    for (const SweepRow& row : sweep.rows) {
      const double closed = isotropic_depolarizing_tau(3, c.fidelity, row.eps);
      worst = std::max(worst, std::abs(row.tau - closed));
      if (row.eps >= c.death && !(row.tau < 1e-12)) death_ok = false;
      if (row.eps <= c.death - 0.011 && !(row.tau > 1e-12)) death_ok = false;
    }
    const double tau0_err = std::abs(sweep.rows.front().tau - c.tau0);
    const double numeric_death =
        numeric_death_point(SuddenDeathFamily::kDepolarizingIsotropic, 3, c.fidelity);
    const bool case_ok = worst <= 1e-8 && tau0_err <= 1e-9 && death_ok &&
                         std::abs(numeric_death - c.death) <= 1e-6;
    pass = pass && case_ok;
    detail << "F=" << c.fidelity << ": dev " << worst << ", tau(0) err " << tau0_err
           << ", death " << numeric_death << "; ";
    CHECK(worst <= 1e-8);
    CHECK(tau0_err <= 1e-9);
    CHECK(death_ok);
    CHECK(std::abs(numeric_death - c.death) <= 1e-6);
  }
  report(3, pass, detail.str());
}

TEST_CASE("criterion 4: exact two-qubit factorization over 1000 seeded pairs") {
  Stopwatch timer;
  Rng rng(40004);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const PureState psi = haar_random_pure(BipartiteDims{2, 2}, rng);
    const QuantumChannel ch = random_channel(2, 1 + rng.below(4), rng);
    const double c_out =
        wootters_concurrence_oracle(apply_one_sided(ch, density_from_pure(psi)).matrix());
    const double c_dual = wootters_concurrence_oracle(choi(ch).state.matrix());
    worst = std::max(worst, std::abs(c_out - c_dual * pure_concurrence(psi)));
  }
  const double elapsed = timer.seconds();
  const bool pass = worst <= 1e-8 && elapsed < 30.0;
  std::ostringstream detail;
  detail << "worst |C(out) - C(dual) C(in)| = " << worst << " over 1000 pairs, " << elapsed
         << " s";
  report(4, pass, detail.str());
  CHECK(worst <= 1e-8);
  CHECK(elapsed < 30.0);
}

TEST_CASE("criterion 5: upper/lower sandwich over 1000 seeded pairs at d=3") {
  Rng rng(50005);
  std::size_t violations = 0;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const PureState psi = haar_random_pure(BipartiteDims{3, 3}, rng);
    const BoundReport rep = check_pure_bounds(psi, random_channel(3, 1 + rng.below(9), rng));
    const double dev = std::max(rep.tau_out - rep.upper_bound, rep.lower_bound - rep.tau_out);
    worst = std::max(worst, dev);
    if (dev > 1e-8) ++violations;
  }
  const bool pass = violations == 0;
  std::ostringstream detail;
  detail << violations << " violations, worst excess " << worst;
  report(5, pass, detail.str());
  CHECK(violations == 0);
}

TEST_CASE("criterion 6: filtering picture equals direct evolution over 500 cases") {
  Rng rng(60006);
  std::size_t violations = 0;
  double worst_entry = 0.0, worst_norm = 0.0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = 2 + t % 2;
    const PureState raw = haar_random_pure(BipartiteDims{d, d}, rng);
    const PureState psi = PureState::from_schmidt_coefficients(schmidt(raw).coefficients);
    QuantumChannel ch = random_channel(d, 1 + rng.below(d * d), rng);
    if (t % 3 == 0) {
      std::vector<ComplexMatrix> scaled = ch.kraus();
      const Complex s(std::sqrt(0.3 + 0.6 * rng.uniform()), 0.0);
      for (ComplexMatrix& k : scaled) k *= s;
      ch = QuantumChannel::make_cp(d, std::move(scaled));
    }
    const ComplexMatrix direct_raw = apply_one_sided_raw(ch, psi.density_matrix(), d);
    const double p_prime = direct_raw.trace().real();
    const ComplexMatrix direct = Complex(1.0 / p_prime, 0.0) * direct_raw;
    const FilterResult fr = filter_map(schmidt(psi), choi(ch));
    const double entry_dev = max_abs_diff(fr.state.matrix(), direct);
    const double norm_dev = std::abs(fr.p_prime - p_prime) / p_prime;
    worst_entry = std::max(worst_entry, entry_dev);
    worst_norm = std::max(worst_norm, norm_dev);
    if (entry_dev > 1e-9 || norm_dev > 1e-9) ++violations;
  }
  const bool pass = violations == 0;
  std::ostringstream detail;
  detail << violations << " violations; worst state dev " << worst_entry
         << ", worst p' relative dev " << worst_norm;
  report(6, pass, detail.str());
  CHECK(violations == 0);
}

TEST_CASE("criterion 7: pure-state identity and convexity, 1000 trials per dimension") {
  Rng rng(70007);
  std::size_t violations = 0;
  double worst_identity = 0.0, worst_convexity = 0.0;
  for (std::size_t d : {2ul, 3ul, 4ul}) {
    for (int t = 0; t < 1000; ++t) {
      const PureState psi = haar_random_pure(BipartiteDims{d, d}, rng);
      const double c = pure_concurrence(psi);
      const double dev = std::abs(tau(density_from_pure(psi)).total - c * c);
      worst_identity = std::max(worst_identity, dev);
      if (dev > 1e-9) ++violations;
    }
    for (int t = 0; t < 1000; ++t) {
      const DensityMatrix r1 = random_mixed(BipartiteDims{d, d}, 1 + rng.below(d * d), rng);
      const DensityMatrix r2 = random_mixed(BipartiteDims{d, d}, 1 + rng.below(d * d), rng);
      const double w = rng.uniform();
      const DensityMatrix mix =
          DensityMatrix::make(r1.dims(), w * r1.matrix() + (1.0 - w) * r2.matrix());
      const double excess =
          tau(mix).total - (w * tau(r1).total + (1.0 - w) * tau(r2).total);
      worst_convexity = std::max(worst_convexity, excess);
      if (excess > 1e-9) ++violations;
    }
  }
  const bool pass = violations == 0;
  std::ostringstream detail;
  detail << violations << " violations; worst identity dev " << worst_identity
         << ", worst convexity excess " << worst_convexity;
  report(7, pass, detail.str());
  CHECK(violations == 0);
}

TEST_CASE("criterion 8: similarity spectra match the quartic root oracle, 1000 instances") {
  Rng rng(80008);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const ComplexMatrix a = random_psd(4, rng);
    const ComplexMatrix b = random_psd(4, rng);
    const ComplexMatrix root = psd_sqrt(a);
    const Spectrum sim = hermitian_eigen(root * b * root, false);
    const std::vector<double> roots = quartic_spectrum_oracle(a * b);
    for (std::size_t k = 0; k < 4; ++k)
      worst = std::max(worst, std::abs(sim.eigenvalues[k] - roots[k]));
  }
  const bool pass = worst <= 1e-7;
  std::ostringstream detail;
  detail << "worst spectral deviation " << worst;
  report(8, pass, detail.str());
  CHECK(worst <= 1e-7);
}

TEST_CASE("criterion 9: mixed-state bound on the isotropic (F, eps) grid") {
  std::size_t violations = 0;
  double worst = 0.0;
  for (double f : {0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
    for (double eps : eps_grid(0.0, 1.0, 51)) {
      const MixedBoundReport rep =
          check_mixed_bound(isotropic(3, f), depolarizing(3, eps), isotropic_tau(3, f), false);
      worst = std::max(worst, rep.tau_out - rep.bound);
      if (rep.violated) ++violations;
    }
  }
  const bool pass = violations == 0;
  std::ostringstream detail;
  detail << violations << " violations over 357 grid points, worst excess " << worst;
  report(9, pass, detail.str());
  CHECK(violations == 0);
}

TEST_CASE("criterion 10: seeded verification reports are byte-identical") {
  RunConfig config;
  config.trials = 40;
  config.seed = 42;
  std::ostringstream out1, out2, log1, log2;
  const std::size_t failures1 = run_verify_command(config, out1, log1);
  const std::size_t failures2 = run_verify_command(config, out2, log2);
  const bool identical = out1.str() == out2.str();
  const bool pass = identical && failures1 == 0 && failures2 == 0;
  std::ostringstream detail;
  detail << "reports " << (identical ? "identical" : "DIFFER") << ", hard failures "
         << failures1 << "/" << failures2;
  report(10, pass, detail.str());
  CHECK(identical);
  CHECK(failures1 == 0);
}
