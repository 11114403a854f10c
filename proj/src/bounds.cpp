#include "qtau/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtau/errors.hpp"

namespace qtau {

namespace {

constexpr double kZeroClip = 1e-12;

void check_index(const BipartiteDims& dims, const ComponentIndex& idx) {
  if (!(idx.p < idx.r && idx.r < dims.d1))
    throw InvalidObjectError("component index: A-side pair (" + std::to_string(idx.p) + "," +
                             std::to_string(idx.r) + ") invalid for d1=" +
                             std::to_string(dims.d1));
  if (!(idx.pp < idx.rp && idx.rp < dims.d2))
    throw InvalidObjectError("component index: B-side pair (" + std::to_string(idx.pp) + "," +
                             std::to_string(idx.rp) + ") invalid for d2=" +
                             std::to_string(dims.d2));
}

// Eigenvalues of the product spectrum below `floor` are formation noise on
// structurally zero directions; square-rooting them would inflate 1e-16
// level roundoff to 1e-8 level lambdas, so they are zeroed first.
double concurrence_from_lambdas(std::vector<double> lambdas, double floor) {
  for (double& l : lambdas) l = l > floor ? std::sqrt(l) : 0.0;
  std::sort(lambdas.begin(), lambdas.end(), std::greater<double>());
  double diff = lambdas[0];
  for (std::size_t i = 1; i < lambdas.size(); ++i) diff -= lambdas[i];
  return diff > kZeroClip ? diff : 0.0;
}

/// Antisymmetric generator L_pr = |p><r| - |r><p|.
ComplexMatrix so_generator(std::size_t d, std::size_t p, std::size_t r) {
  ComplexMatrix l(d, d);
  l(p, r) = 1.0;
  l(r, p) = -1.0;
  return l;
}

}  // namespace

std::vector<ComponentIndex> component_indices(const BipartiteDims& dims) {
  std::vector<ComponentIndex> out;
  out.reserve(dims.d1 * (dims.d1 - 1) / 2 * dims.d2 * (dims.d2 - 1) / 2);
  for (std::size_t p = 0; p + 1 < dims.d1; ++p)
    for (std::size_t r = p + 1; r < dims.d1; ++r)
      for (std::size_t pp = 0; pp + 1 < dims.d2; ++pp)
        for (std::size_t rp = pp + 1; rp < dims.d2; ++rp)
          out.push_back(ComponentIndex{p, r, pp, rp});
  return out;
}

ComplexMatrix component_submatrix(const ComplexMatrix& rho, const BipartiteDims& dims,
                                  const ComponentIndex& idx) {
  const std::size_t levels[4] = {idx.p * dims.d2 + idx.pp, idx.p * dims.d2 + idx.rp,
                                 idx.r * dims.d2 + idx.pp, idx.r * dims.d2 + idx.rp};
  ComplexMatrix sub(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) sub(i, j) = rho(levels[i], levels[j]);
  return sub;
}

ComplexMatrix spin_flip_4(const ComplexMatrix& m) {
  // sy (x) sy is the antidiagonal (-1, 1, 1, -1); conjugating flips both
  // indices through 3 - k and applies the sign pattern.
  ComplexMatrix out(4, 4);
  static const double sign[4] = {-1.0, 1.0, 1.0, -1.0};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      out(i, j) = sign[i] * sign[j] * std::conj(m(3 - i, 3 - j));
  return out;
}

double component_concurrence(const DensityMatrix& rho, const ComponentIndex& idx) {
  check_index(rho.dims(), idx);
  const ComplexMatrix sub = component_submatrix(rho.matrix(), rho.dims(), idx);
  const ComplexMatrix flipped = spin_flip_4(sub);
  // Nonzero spectrum of sub * flipped through the Hermitian similarity
  // sqrt(sub) flipped sqrt(sub).
  const double norm = sub.frobenius_norm();
  const ComplexMatrix root = psd_sqrt(sub);
  const Spectrum spec = hermitian_eigen(root * flipped * root, false);
  return concurrence_from_lambdas(spec.eigenvalues, 1e-13 * norm * norm);
}

double component_concurrence_generators(const DensityMatrix& rho, const ComponentIndex& idx) {
  check_index(rho.dims(), idx);
  const ComplexMatrix flip =
      kron(so_generator(rho.dims().d1, idx.p, idx.r), so_generator(rho.dims().d2, idx.pp, idx.rp));
  const ComplexMatrix rho_tilde = flip * rho.matrix().conjugate() * flip;
  const ComplexMatrix root = psd_sqrt(rho.matrix());
  const Spectrum spec = hermitian_eigen(root * rho_tilde * root, false);
  // Only four eigenvalues can be nonzero; keep the top four.
  std::vector<double> top(spec.eigenvalues.begin(), spec.eigenvalues.begin() + 4);
  return concurrence_from_lambdas(std::move(top),
                                  1e-13 * rho.matrix().frobenius_norm() *
                                      rho_tilde.frobenius_norm());
}

TauBreakdown tau(const DensityMatrix& rho) {
  TauBreakdown breakdown;
  for (const ComponentIndex& idx : component_indices(rho.dims())) {
    const double c = component_concurrence(rho, idx);
    breakdown.components.push_back(ComponentValue{idx, c});
    breakdown.total += c * c;
  }
  return breakdown;
}

double pure_concurrence(const PureState& psi) {
  const ComplexMatrix rho_a = psi.reduced_a();
  const ComplexMatrix sq = rho_a * rho_a;
  const double purity = sq.trace().real();
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
}

double isotropic_tau(std::size_t d, double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0))
    throw InvalidObjectError("isotropic_tau: fidelity " + std::to_string(fidelity) +
                             " outside [0,1]");
  const double dd = static_cast<double>(d);
  const double excess = fidelity - 1.0 / dd;
  if (excess <= 0.0) return 0.0;
  return 2.0 * dd / (dd - 1.0) * excess * excess;
}

double tangle_upper_estimate(const DensityMatrix& rho, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidObjectError("tangle_upper_estimate: trials must be >= 1");
  const std::size_t n = rho.dims().total();
  const Spectrum spec = hermitian_eigen(rho.matrix(), true);
  const ComplexMatrix& vecs = *spec.eigenvectors;

  std::size_t rank = 0;
  for (double mu : spec.eigenvalues)
    if (mu > kZeroClip) ++rank;
  if (rank == 0) throw InvalidObjectError("tangle_upper_estimate: zero state");

  // Subnormalized eigen-ensemble columns sqrt(mu_k) |e_k>.
  ComplexMatrix ensemble(n, rank);
  for (std::size_t k = 0; k < rank; ++k) {
    const double w = std::sqrt(spec.eigenvalues[k]);
    for (std::size_t i = 0; i < n; ++i) ensemble(i, k) = w * vecs(i, k);
  }

  auto decomposition_value = [&](const ComplexMatrix& members) {
    // Columns are subnormalized pure states; value = sum p_i C^2(psi_i).
    double value = 0.0;
    for (std::size_t c = 0; c < members.cols(); ++c) {
      double p = 0.0;
      for (std::size_t i = 0; i < n; ++i) p += std::norm(members(i, c));
      if (p <= kZeroClip) continue;
      std::vector<Complex> amps(n);
      const double inv = 1.0 / std::sqrt(p);
      for (std::size_t i = 0; i < n; ++i) amps[i] = inv * members(i, c);
      const PureState psi = PureState::make(rho.dims(), std::move(amps));
      const double c2 = pure_concurrence(psi);
      value += p * c2 * c2;
    }
    return value;
  };

  double best = decomposition_value(ensemble);
  if (rank == 1) return best;

  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t m = rank + t % 3;
    const ComplexMatrix u = haar_random_unitary(m, rng);
    // members = ensemble * (first `rank` rows of u)^T: an m-element mixing.
    ComplexMatrix members(n, m);
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t i = 0; i < n; ++i) {
        Complex sum = 0.0;
        for (std::size_t k = 0; k < rank; ++k) sum += u(c, k) * ensemble(i, k);
        members(i, c) = sum;
      }
    best = std::min(best, decomposition_value(members));
  }
  return best;
}

}  // namespace qtau
