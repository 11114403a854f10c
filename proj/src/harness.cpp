#include "qtau/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "qtau/errors.hpp"

namespace qtau {

namespace {

constexpr double kDeadTau = 1e-12;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// Runs fn(i) for i in [0, n); results land in index-owned slots, so the
/// schedule cannot change the outcome.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min({hw, n, static_cast<std::size_t>(8)});
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          fn(i);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!failed.exchange(true)) first_error = e.what();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failed.load()) throw InvariantViolation("verification worker failed: " + first_error);
}

struct CheckSpec {
  std::string name;
  std::size_t cases = 0;
  double tolerance = 0.0;
  bool hard = true;
  // Returns the deviation from the asserted relation for one case.
  std::function<double(std::size_t, Rng&)> deviation;
};

CheckResult run_check(const CheckSpec& spec, std::uint64_t seed) {
  const Rng base(seed ^ fnv1a(spec.name));
  std::vector<double> deviations(spec.cases, 0.0);
  parallel_for(spec.cases, [&](std::size_t i) {
    Rng rng = base.fork(i);
    deviations[i] = spec.deviation(i, rng);
  });
  CheckResult result;
  result.name = spec.name;
  result.cases = spec.cases;
  result.hard = spec.hard;
  for (double dev : deviations) {
    result.max_deviation = std::max(result.max_deviation, dev);
    if (dev > spec.tolerance) ++result.failures;
  }
  return result;
}

std::size_t cycle_dim(std::size_t i) { return 2 + i % 3; }

PureState canonical_random_pure(std::size_t d, Rng& rng) {
  const PureState raw = haar_random_pure(BipartiteDims{d, d}, rng);
  return PureState::from_schmidt_coefficients(schmidt(raw).coefficients);
}

QuantumChannel random_tp_channel(std::size_t d, Rng& rng) {
  return random_channel(d, 1 + rng.below(d * d), rng);
}

DensityMatrix random_product_mixture(std::size_t d, std::size_t terms, Rng& rng) {
  const std::size_t n = d * d;
  ComplexMatrix m(n, n);
  std::vector<double> weights(terms);
  double wsum = 0.0;
  for (double& w : weights) {
    w = rng.uniform() + 1e-3;
    wsum += w;
  }
  for (std::size_t k = 0; k < terms; ++k) {
    std::vector<Complex> a(d), b(d);
    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      a[i] = Complex(rng.gaussian(), rng.gaussian());
      b[i] = Complex(rng.gaussian(), rng.gaussian());
      na += std::norm(a[i]);
      nb += std::norm(b[i]);
    }
    const double scale = weights[k] / (wsum * na * nb);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t ib = 0; ib < d; ++ib)
        for (std::size_t j = 0; j < d; ++j)
          for (std::size_t jb = 0; jb < d; ++jb)
            m(i * d + ib, j * d + jb) +=
                scale * a[i] * b[ib] * std::conj(a[j]) * std::conj(b[jb]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = Complex(m(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return DensityMatrix::make(BipartiteDims{d, d}, std::move(m));
}

ComplexMatrix random_psd_unit_trace(std::size_t n, Rng& rng) {
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  ComplexMatrix m = g * g.adjoint();
  m *= Complex(1.0 / m.trace().real(), 0.0);
  return m;
}

ComplexMatrix partial_trace_b(const ComplexMatrix& m, std::size_t d1, std::size_t d2) {
  ComplexMatrix out(d1, d1);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d1; ++j) {
      Complex sum = 0.0;
      for (std::size_t k = 0; k < d2; ++k) sum += m(i * d2 + k, j * d2 + k);
      out(i, j) = sum;
    }
  return out;
}

double tau_of(const DensityMatrix& rho) { return tau(rho).total; }

}  // namespace

double wootters_concurrence(const ComplexMatrix& rho4) {
  if (rho4.rows() != 4 || rho4.cols() != 4)
    throw InvalidObjectError("wootters_concurrence: expected a 4x4 matrix");
  const ComplexMatrix flipped = spin_flip_4(rho4);
  const double norm = rho4.frobenius_norm();
  const ComplexMatrix root = psd_sqrt(rho4);
  const Spectrum spec = hermitian_eigen(root * flipped * root, false);
  const double floor = 1e-13 * norm * norm;
  double sum = 0.0, top = 0.0;
  for (double lam : spec.eigenvalues) {
    const double l = lam > floor ? std::sqrt(lam) : 0.0;
    sum += l;
    top = std::max(top, l);
  }
  const double c = 2.0 * top - sum;
  return c > kDeadTau ? c : 0.0;
}

double numeric_death_point(SuddenDeathFamily family, std::size_t d,
                           std::optional<double> fidelity) {
  std::vector<double> uniform(d, 1.0 / static_cast<double>(d));
  auto value = [&](double eps) {
    switch (family) {
      case SuddenDeathFamily::kDepolarizingPure:
        return closed_form_tau(ChannelFamily::kDepolarizing, uniform, eps);
      case SuddenDeathFamily::kDepolarizingIsotropic:
        return isotropic_depolarizing_tau(d, fidelity.value(), eps);
      case SuddenDeathFamily::kPhaseDampingPure:
        return closed_form_tau(ChannelFamily::kPhaseDamping, uniform, eps);
    }
    return 0.0;
  };
  if (family == SuddenDeathFamily::kDepolarizingIsotropic && !fidelity)
    throw InvalidObjectError("numeric_death_point: isotropic family needs a fidelity");
  // The closed forms clip through max{0,.}, so extinction is exact; testing
  // against a small positive floor instead would bias the root by
  // sqrt(floor) on these quadratic tails.
  auto dead = [&](double eps) { return value(eps) <= 0.0; };
  if (dead(0.0)) return 0.0;
  if (!dead(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (dead(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::size_t CampaignReport::hard_failures() const {
  std::size_t total = 0;
  for (const CheckResult& c : checks)
    if (c.hard) total += c.failures;
  return total;
}

CampaignReport run_campaign(std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidObjectError("run_campaign: trials must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t T = trials;
  auto at_least = [](std::size_t v) { return std::max<std::size_t>(1, v); };

  std::vector<CheckSpec> specs;

  specs.push_back({"linalg_oracle_equivalence", T, 1e-7, true, [](std::size_t, Rng& rng) {
    const ComplexMatrix a = random_psd_unit_trace(4, rng);
    const ComplexMatrix b = random_psd_unit_trace(4, rng);
    const ComplexMatrix root = psd_sqrt(a);
    const Spectrum sim = hermitian_eigen(root * b * root, false);
    const std::vector<double> roots = quartic_spectrum_oracle(a * b);
    double dev = 0.0;
    for (std::size_t k = 0; k < 4; ++k) dev = std::max(dev, std::abs(sim.eigenvalues[k] - roots[k]));
    return dev;
  }});

  specs.push_back({"bounds_pure_tau_equals_c2", 3 * T, 1e-9, true, [](std::size_t i, Rng& rng) {
    const std::size_t d = cycle_dim(i);
    const PureState psi = haar_random_pure(BipartiteDims{d, d}, rng);
    const double c = pure_concurrence(psi);
    return std::abs(tau_of(density_from_pure(psi)) - c * c);
  }});

  specs.push_back({"bounds_convexity", T, 1e-9, true, [](std::size_t i, Rng& rng) {
    const std::size_t d = cycle_dim(i);
    const DensityMatrix r1 = random_mixed(BipartiteDims{d, d}, 1 + rng.below(d * d), rng);
    const DensityMatrix r2 = random_mixed(BipartiteDims{d, d}, 1 + rng.below(d * d), rng);
    const double t = rng.uniform();
    ComplexMatrix mix = t * r1.matrix() + (1.0 - t) * r2.matrix();
    const DensityMatrix mixed = DensityMatrix::make(r1.dims(), std::move(mix));
    return tau_of(mixed) - (t * tau_of(r1) + (1.0 - t) * tau_of(r2));
  }});

  // Local-unitary invariance is a theorem for pure states in every
  // dimension and for arbitrary 2x2 states; for higher-dimensional mixed
  // states the component bound is basis-dependent, so those stay out.
  specs.push_back({"bounds_lu_invariance_pure", T, 1e-8, true, [](std::size_t i, Rng& rng) {
    const std::size_t d = cycle_dim(i);
    const bool mixed_qubit_case = (i % 4 == 3);
    const DensityMatrix rho =
        mixed_qubit_case ? random_mixed(BipartiteDims{2, 2}, 1 + rng.below(4), rng)
                         : density_from_pure(haar_random_pure(BipartiteDims{d, d}, rng));
    const std::size_t da = rho.dims().d1, db = rho.dims().d2;
    const ComplexMatrix rot = kron(haar_random_unitary(da, rng), haar_random_unitary(db, rng));
    const DensityMatrix rotated =
        DensityMatrix::make(rho.dims(), rot * rho.matrix() * rot.adjoint());
    return std::abs(tau_of(rho) - tau_of(rotated));
  }});

  specs.push_back({"bounds_separable_zero", T, 1e-9, true, [](std::size_t i, Rng& rng) {
    const std::size_t d = cycle_dim(i);
    return tau_of(random_product_mixture(d, 1 + i % 5, rng));
  }});

  specs.push_back({"bounds_wootters_d2", T, 1e-9, true, [](std::size_t i, Rng& rng) {
    const DensityMatrix rho = random_mixed(BipartiteDims{2, 2}, 1 + i % 4, rng);
    const double c = wootters_concurrence(rho.matrix());
    return std::abs(tau_of(rho) - c * c);
  }});

  specs.push_back({"dyn_qubit_factorization", T, 1e-8, true, [](std::size_t, Rng& rng) {
    const PureState psi = haar_random_pure(BipartiteDims{2, 2}, rng);
    const QuantumChannel ch = random_tp_channel(2, rng);
    const double c_out = wootters_concurrence(apply_one_sided(ch, density_from_pure(psi)).matrix());
    const double c_dual = wootters_concurrence(choi(ch).state.matrix());
    return std::abs(c_out - c_dual * pure_concurrence(psi));
  }});

  specs.push_back({"dyn_component_evolution", T, 1e-8, true, [](std::size_t i, Rng& rng) {
    const std::size_t d = cycle_dim(i);
    const PureState psi = haar_random_pure(BipartiteDims{d, d}, rng);
    return component_evolution_check(psi, random_tp_channel(d, rng));
  }});

  specs.push_back({"dyn_bound_sandwich", T, 1e-8, true, [](std::size_t, Rng& rng) {
    const PureState psi = haar_random_pure(BipartiteDims{3, 3}, rng);
    const BoundReport rep = check_pure_bounds(psi, random_tp_channel(3, rng));
    return std::max(rep.tau_out - rep.upper_bound, rep.lower_bound - rep.tau_out);
  }});

  {
    const std::vector<double> fs = {0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    const std::vector<double> grid = eps_grid(0.0, 1.0, 51);
    specs.push_back({"dyn_mixed_bound_isotropic_grid", fs.size() * grid.size(), 1e-8, true,
                     [fs, grid](std::size_t i, Rng&) {
      const double f = fs[i / grid.size()];
      const double eps = grid[i % grid.size()];
      const MixedBoundReport rep = check_mixed_bound(isotropic(3, f), depolarizing(3, eps),
                                                     isotropic_tau(3, f), false);
      return rep.tau_out - rep.bound;
    }});
  }

  specs.push_back({"dyn_mixed_bound_estimate", at_least(T / 2), 1e-8, true,
                   [](std::size_t i, Rng& rng) {
    const DensityMatrix rho = random_mixed(BipartiteDims{3, 3}, 2, rng);
    const QuantumChannel ch = random_tp_channel(3, rng);
    const double estimate = tangle_upper_estimate(rho, 150, rng.next_u64());
    const MixedBoundReport rep = check_mixed_bound(rho, ch, estimate, false);
    (void)i;
    return rep.tau_out - rep.bound;
  }});

  specs.push_back({"dyn_tangle_bound_exact_d2", at_least(T / 5), 1e-8, true, [](std::size_t i, Rng& rng) {
    const DensityMatrix rho = random_mixed(BipartiteDims{2, 2}, 1 + i % 4, rng);
    const TangleDynamicsReport rep =
        tangle_dynamics_check(rho, random_tp_channel(2, rng), 50, rng.next_u64());
    if (!rep.exact) return 1.0;  // d=2 tangles must be recognized as exact
    return rep.estimate_out - rep.bound;
  }});

  specs.push_back({"dyn_tangle_bound_estimate_soft", at_least(T / 5), 1e-8, false,
                   [](std::size_t i, Rng& rng) {
    const bool pure_input = (i % 2 == 0);
    const DensityMatrix rho = pure_input
                                  ? density_from_pure(canonical_random_pure(3, rng))
                                  : random_mixed(BipartiteDims{3, 3}, 2, rng);
    const TangleDynamicsReport rep =
        tangle_dynamics_check(rho, random_tp_channel(3, rng), 150, rng.next_u64());
    return rep.estimate_out - rep.bound;
  }});

  {
    specs.push_back({"dyn_closed_form_agreement", 6, 1e-8, true, [](std::size_t i, Rng& rng) {
      const std::size_t d = 2 + i / 2;
      const ChannelFamily family =
          (i % 2 == 0) ? ChannelFamily::kDepolarizing : ChannelFamily::kPhaseDamping;
      const PureState psi = canonical_random_pure(d, rng);
      const std::vector<double> omega = schmidt(psi).coefficients;
      double worst = 0.0;
      for (double eps : eps_grid(0.0, 1.0, 101)) {
        const QuantumChannel ch = family == ChannelFamily::kDepolarizing
                                      ? depolarizing(d, eps)
                                      : phase_damping(d, eps);
        const double generic = tau_of(apply_one_sided(ch, density_from_pure(psi)));
        worst = std::max(worst, std::abs(generic - closed_form_tau(family, omega, eps)));
      }
      return worst;
    }});
  }

  specs.push_back({"dyn_monotonicity", 4, 1e-10, true, [](std::size_t i, Rng& rng) {
    const ChannelFamily family =
        (i % 2 == 0) ? ChannelFamily::kDepolarizing : ChannelFamily::kPhaseDamping;
    const PureState psi = (i < 2) ? PureState::from_schmidt_coefficients({2.0 / 3, 1.0 / 6, 1.0 / 6})
                                  : canonical_random_pure(3, rng);
    const SweepResult sweep = sweep_pure(psi, family, eps_grid(0.0, 1.0, 101));
    double worst = 0.0;
    for (std::size_t k = 1; k < sweep.rows.size(); ++k)
      worst = std::max(worst, sweep.rows[k].tau - sweep.rows[k - 1].tau);
    return worst;
  }});

  specs.push_back({"dyn_tau_break_propagation", at_least(T / 10), 1e-9, true,
                   [](std::size_t i, Rng& rng) {
    const std::size_t d = 2 + i % 2;
    const double dd = static_cast<double>(d);
    const double eps = std::min(1.0, dd / (dd + 1.0) + 0.05 * static_cast<double>(i % 5));
    const QuantumChannel ch = depolarizing(d, eps);
    if (tau_of(choi(ch).state) >= kDeadTau) return 1.0;  // must be entanglement-broken for tau
    const PureState psi = haar_random_pure(BipartiteDims{d, d}, rng);
    return tau_of(apply_one_sided(ch, density_from_pure(psi)));
  }});

  specs.push_back({"dyn_threshold_consistency", 8, 1e-6, true, [](std::size_t i, Rng&) {
    if (i < 3) {
      const std::size_t d = 2 + i;
      const double analytic =
          *sudden_death_threshold(SuddenDeathFamily::kDepolarizingPure, d);
      return std::abs(analytic - numeric_death_point(SuddenDeathFamily::kDepolarizingPure, d, {}));
    }
    if (i < 7) {
      const double fs[4] = {0.5, 2.0 / 3.0, 0.8, 8.0 / 9.0};
      const double f = fs[i - 3];
      const double analytic =
          *sudden_death_threshold(SuddenDeathFamily::kDepolarizingIsotropic, 3, f);
      return std::abs(analytic -
                      numeric_death_point(SuddenDeathFamily::kDepolarizingIsotropic, 3, f));
    }
    // Phase damping never dies early; the numeric search must run to 1.
    if (sudden_death_threshold(SuddenDeathFamily::kPhaseDampingPure, 3).has_value()) return 1.0;
    return std::abs(1.0 - numeric_death_point(SuddenDeathFamily::kPhaseDampingPure, 3, {}));
  }});

  // A 3x3 Werner state under phase damping: tau > 0 at eps = 0 yet dead
  // before eps = 1 for mixing in (1/2, 1), the sudden death the plain pure
  // case cannot show.
  specs.push_back({"dyn_werner_phase_damping_death", 9, 0.5, true, [](std::size_t i, Rng&) {
    const double mu = 0.55 + 0.05 * static_cast<double>(i);
    const DensityMatrix rho = werner(3, mu);
    if (tau_of(rho) <= 0.0) return 1.0;
    bool died_early = false;
    for (double eps : eps_grid(0.0, 1.0, 51)) {
      if (eps < 1.0 && tau_of(apply_one_sided(phase_damping(3, eps), rho)) < kDeadTau) {
        died_early = true;
        break;
      }
    }
    return died_early ? 0.0 : 1.0;
  }});

  specs.push_back({"chan_filter_dual_identity", at_least(T / 2), 1e-9, true,
                   [](std::size_t i, Rng& rng) {
    const std::size_t d = 2 + i % 2;
    const PureState psi = canonical_random_pure(d, rng);
    QuantumChannel ch = random_tp_channel(d, rng);
    if (i % 3 == 0) {
      // Sub-normalized CP map: same identity, nontrivial p''.
      std::vector<ComplexMatrix> scaled = ch.kraus();
      const Complex s(std::sqrt(0.3 + 0.6 * rng.uniform()), 0.0);
      for (ComplexMatrix& k : scaled) k *= s;
      ch = QuantumChannel::make_cp(d, std::move(scaled));
    }
    const ComplexMatrix direct_raw = apply_one_sided_raw(ch, psi.density_matrix(), d);
    const double p_prime_direct = direct_raw.trace().real();
    const ComplexMatrix direct = Complex(1.0 / p_prime_direct, 0.0) * direct_raw;
    const FilterResult fr = filter_map(schmidt(psi), choi(ch));
    const double entry_dev = max_abs_diff(fr.state.matrix(), direct);
    const double rel_dev = std::abs(fr.p_prime - p_prime_direct) / p_prime_direct;
    return std::max(entry_dev, rel_dev);
  }});

  specs.push_back({"chan_choi_marginal", at_least(T / 5), 1e-9, true, [](std::size_t i, Rng& rng) {
    const std::size_t d = cycle_dim(i);
    const ChoiState dual = choi(random_tp_channel(d, rng));
    ComplexMatrix expect = ComplexMatrix::identity(d);
    expect *= Complex(1.0 / static_cast<double>(d), 0.0);
    return max_abs_diff(partial_trace_b(dual.state.matrix(), d, d), expect);
  }});

  specs.push_back({"chan_mixture_linearity", at_least(T / 5), 1e-10, true,
                   [](std::size_t i, Rng& rng) {
    const std::size_t d = cycle_dim(i);
    const QuantumChannel ch = random_tp_channel(d, rng);
    double w[3] = {rng.uniform() + 1e-3, rng.uniform() + 1e-3, rng.uniform() + 1e-3};
    const double wsum = w[0] + w[1] + w[2];
    ComplexMatrix mix(d * d, d * d);
    ComplexMatrix mapped_sum(d * d, d * d);
    for (int k = 0; k < 3; ++k) {
      const DensityMatrix rho = random_mixed(BipartiteDims{d, d}, 1 + rng.below(d), rng);
      mix += (w[k] / wsum) * rho.matrix();
      mapped_sum += (w[k] / wsum) * apply_one_sided_raw(ch, rho.matrix(), d);
    }
    return max_abs_diff(apply_one_sided_raw(ch, mix, d), mapped_sum);
  }});

  specs.push_back({"states_schmidt_lu_invariance", at_least(T / 5), 1e-9, true,
                   [](std::size_t i, Rng& rng) {
    const BipartiteDims dims{2 + i % 3, 2 + (i / 3) % 3};
    const PureState psi = haar_random_pure(dims, rng);
    const ComplexMatrix rot =
        kron(haar_random_unitary(dims.d1, rng), haar_random_unitary(dims.d2, rng));
    std::vector<Complex> rotated(dims.total(), Complex(0.0, 0.0));
    for (std::size_t r = 0; r < dims.total(); ++r)
      for (std::size_t c = 0; c < dims.total(); ++c)
        rotated[r] += rot(r, c) * psi.amplitudes()[c];
    const SchmidtData s1 = schmidt(psi);
    const SchmidtData s2 = schmidt(PureState::make(dims, std::move(rotated)));
    double dev = 0.0;
    for (std::size_t k = 0; k < s1.coefficients.size(); ++k)
      dev = std::max(dev, std::abs(s1.coefficients[k] - s2.coefficients[k]));
    return dev;
  }});

  specs.push_back({"states_isotropic_twirl", at_least(T / 5), 1e-9, true,
                   [](std::size_t i, Rng& rng) {
    const std::size_t d = cycle_dim(i);
    const DensityMatrix rho = isotropic(d, rng.uniform());
    const ComplexMatrix u = haar_random_unitary(d, rng);
    const ComplexMatrix rot = kron(u, u.conjugate());
    return max_abs_diff(rot * rho.matrix() * rot.adjoint(), rho.matrix());
  }});

  specs.push_back({"harness_input_validation", 3, 0.5, true, [](std::size_t i, Rng&) {
    ComplexMatrix bad = ComplexMatrix::identity(4);
    if (i == 0) {
      // Not PSD: an off-diagonal coherence larger than the diagonal allows.
      bad *= Complex(0.25, 0.0);
      bad(0, 3) = bad(3, 0) = 0.9;
    } else if (i == 1) {
      bad *= Complex(0.5, 0.0);  // trace 2
    } else {
      bad *= Complex(0.25, 0.0);
      bad(0, 1) = 0.2;  // non-Hermitian
    }
    try {
      (void)DensityMatrix::make(BipartiteDims{2, 2}, std::move(bad));
    } catch (const InvalidObjectError&) {
      return 0.0;  // typed input error, as required
    } catch (...) {
      return 1.0;
    }
    return 1.0;  // accepted a corrupt input
  }});

  CampaignReport report;
  report.seed = seed;
  report.trials = trials;
  for (const CheckSpec& spec : specs) report.checks.push_back(run_check(spec, seed));
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

nlohmann::json to_json(const CampaignReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult& c : report.checks) {
    checks.push_back(nlohmann::json{{"name", c.name},
                                    {"cases", c.cases},
                                    {"failures", c.failures},
                                    {"max_deviation", c.max_deviation},
                                    {"hard", c.hard}});
  }
  return nlohmann::json{{"seed", report.seed},
                        {"trials", report.trials},
                        {"checks", std::move(checks)},
                        {"hard_failures", report.hard_failures()}};
}

void apply_config_json(const nlohmann::json& j, RunConfig& config) {
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "d") config.d = value.get<std::size_t>();
      else if (key == "channel") config.channel = value.get<std::string>();
      else if (key == "eps") config.eps = value.get<double>();
      else if (key == "eps_grid") {
        config.grid_start = value.at(0).get<double>();
        config.grid_stop = value.at(1).get<double>();
        config.grid_points = value.at(2).get<std::size_t>();
      } else if (key == "state") config.state = value.get<std::string>();
      else if (key == "fidelity") config.fidelity = value.get<double>();
      else if (key == "trials") config.trials = value.get<std::size_t>();
      else if (key == "seed") config.seed = value.get<std::uint64_t>();
      else if (key == "out") config.out_path = value.get<std::string>();
      else if (key == "family") config.family = value.get<std::string>();
      else throw ParseError("config: unknown key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("config: bad value for '" + key + "': " + e.what());
    }
  }
}

DensityMatrix ResolvedState::as_density() const {
  if (density) return *density;
  if (pure) return density_from_pure(*pure);
  throw InvalidObjectError("resolved state is empty");
}

ResolvedState resolve_state(const RunConfig& config) {
  const std::string& spec = config.state;
  ResolvedState out;
  auto starts_with = [&](const char* prefix) { return spec.rfind(prefix, 0) == 0; };

  if (spec == "maxent") {
    out.pure = max_entangled(config.d);
  } else if (starts_with("schmidt:")) {
    std::vector<double> omega;
    std::stringstream ss(spec.substr(8));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        omega.push_back(std::stod(item));
      } catch (...) {
        throw ParseError("state spec: bad Schmidt coefficient '" + item + "'");
      }
    }
    if (omega.empty()) throw ParseError("state spec: schmidt: needs coefficients");
    out.pure = PureState::from_schmidt_coefficients(omega);
  } else if (spec == "isotropic") {
    if (!config.fidelity) throw ParseError("state spec: isotropic needs --fidelity");
    out.density = isotropic(config.d, *config.fidelity);
  } else if (starts_with("werner:")) {
    double mu;
    try {
      mu = std::stod(spec.substr(7));
    } catch (...) {
      throw ParseError("state spec: bad Werner mixing '" + spec.substr(7) + "'");
    }
    out.density = werner(config.d, mu);
  } else if (starts_with("random:")) {
    std::size_t rank;
    try {
      rank = static_cast<std::size_t>(std::stoul(spec.substr(7)));
    } catch (...) {
      throw ParseError("state spec: bad random rank '" + spec.substr(7) + "'");
    }
    out.density = random_mixed(BipartiteDims{config.d, config.d}, rank, config.seed);
  } else if (starts_with("file:")) {
    const LoadedState loaded = state_from_json(parse_json_file(spec.substr(5)));
    out.pure = loaded.pure;
    out.density = loaded.density;
  } else {
    throw ParseError("state spec: unknown form '" + spec + "'");
  }
  return out;
}

QuantumChannel resolve_channel(const RunConfig& config, double eps) {
  if (config.channel == "depolarizing") return depolarizing(config.d, eps);
  if (config.channel == "phase_damping") return phase_damping(config.d, eps);
  if (config.channel.rfind("kraus:", 0) == 0)
    return channel_from_json(parse_json_file(config.channel.substr(6)));
  throw ParseError("channel spec: unknown form '" + config.channel + "'");
}

namespace {

void emit(const RunConfig& config, std::ostream& fallback, const std::string& content) {
  if (config.out_path.empty()) {
    fallback << content;
    return;
  }
  write_text_file(config.out_path, content);
}

}  // namespace

void run_tau_command(const RunConfig& config, std::ostream& out) {
  DensityMatrix rho = resolve_state(config).as_density();
  // With --eps (or an explicit Kraus file) the state first runs through the
  // one-sided channel; otherwise tau of the state itself.
  const bool kraus_file = config.channel.rfind("kraus:", 0) == 0;
  if (config.eps || kraus_file) {
    RunConfig channel_config = config;
    channel_config.d = rho.dims().d2;
    rho = apply_one_sided(resolve_channel(channel_config, config.eps.value_or(0.0)), rho);
  }
  emit(config, out, to_json(tau(rho)).dump(2) + "\n");
}

void run_sweep_command(const RunConfig& config, std::ostream& out) {
  const ChannelFamily family = channel_family_from_string(config.channel);
  const std::vector<double> grid =
      eps_grid(config.grid_start, config.grid_stop, config.grid_points);
  const ResolvedState state = resolve_state(config);
  const SweepResult result = state.pure ? sweep_pure(*state.pure, family, grid)
                                        : sweep_mixed(*state.density, family, grid);
  emit(config, out, to_csv(result));
}

std::size_t run_verify_command(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const CampaignReport report = run_campaign(config.trials, config.seed);
  for (const CheckResult& c : report.checks) {
    log << (c.failures == 0 ? "pass" : (c.hard ? "FAIL" : "soft")) << "  " << c.name << "  ("
        << c.cases << " cases, " << c.failures << " failures, max dev "
        << format_double(c.max_deviation) << ")\n";
  }
  log << "campaign wall clock: " << format_double(report.wall_clock_seconds) << " s\n";
  emit(config, out, to_json(report).dump(2) + "\n");
  return report.hard_failures();
}

void run_threshold_command(const RunConfig& config, std::ostream& out) {
  const SuddenDeathFamily family = sudden_death_family_from_string(config.family);
  const std::optional<double> analytic = sudden_death_threshold(family, config.d, config.fidelity);
  const double numeric = numeric_death_point(family, config.d, config.fidelity);
  nlohmann::json j;
  j["analytic"] = analytic ? nlohmann::json(*analytic) : nlohmann::json(nullptr);
  j["numeric"] = numeric;
  if (!analytic)
    j["note"] = "tau decays asymptotically for this family; it vanishes only at eps = 1";
  emit(config, out, j.dump(2) + "\n");
}

}  // namespace qtau
