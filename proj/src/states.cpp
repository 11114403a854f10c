#include "qtau/states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtau/errors.hpp"

namespace qtau {

namespace {

constexpr double kRankCutoff = 1e-12;

double norm2(const std::vector<Complex>& v) {
  double s = 0.0;
  for (Complex z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

BipartiteDims checked_dims(std::size_t d1, std::size_t d2) {
  if (d1 < 2 || d2 < 2)
    throw InvalidObjectError("bipartite dimensions must both be at least 2, got " +
                             std::to_string(d1) + "x" + std::to_string(d2));
  return BipartiteDims{d1, d2};
}

std::size_t SchmidtData::rank() const {
  std::size_t r = 0;
  for (double w : coefficients)
    if (w > kRankCutoff) ++r;
  return r;
}

PureState PureState::make(BipartiteDims dims, std::vector<Complex> amplitudes) {
  checked_dims(dims.d1, dims.d2);
  if (amplitudes.size() != dims.total())
    throw InvalidObjectError("pure state: expected " + std::to_string(dims.total()) +
                             " amplitudes, got " + std::to_string(amplitudes.size()));
  for (Complex z : amplitudes)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidObjectError("pure state: non-finite amplitude");
  const double n = norm2(amplitudes);
  if (std::abs(n - 1.0) > 1e-10)
    throw InvalidObjectError("pure state: norm " + std::to_string(n) + " is not 1");
  return PureState(dims, std::move(amplitudes));
}

PureState PureState::from_schmidt_coefficients(const std::vector<double>& omega) {
  if (omega.size() < 2)
    throw InvalidObjectError("from_schmidt_coefficients: need at least two coefficients");
  double sum = 0.0;
  for (double w : omega) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw InvalidObjectError("from_schmidt_coefficients: coefficients must be nonnegative");
    sum += w;
  }
  if (sum <= 0.0) throw InvalidObjectError("from_schmidt_coefficients: all coefficients zero");
  const std::size_t d = omega.size();
  std::vector<Complex> amps(d * d, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < d; ++i) amps[i * d + i] = std::sqrt(omega[i] / sum);
  return PureState(BipartiteDims{d, d}, std::move(amps));
}

ComplexMatrix PureState::coefficient_matrix() const {
  ComplexMatrix m(dims_.d1, dims_.d2);
  for (std::size_t i = 0; i < dims_.d1; ++i)
    for (std::size_t j = 0; j < dims_.d2; ++j) m(i, j) = amplitude(i, j);
  return m;
}

ComplexMatrix PureState::reduced_a() const {
  const ComplexMatrix psi = coefficient_matrix();
  return psi * psi.adjoint();
}

ComplexMatrix PureState::density_matrix() const {
  const std::size_t n = dims_.total();
  ComplexMatrix rho(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rho(i, j) = amps_[i] * std::conj(amps_[j]);
  return rho;
}

DensityMatrix DensityMatrix::make(BipartiteDims dims, ComplexMatrix matrix) {
  checked_dims(dims.d1, dims.d2);
  const std::size_t n = dims.total();
  if (matrix.rows() != n || matrix.cols() != n)
    throw InvalidObjectError("density matrix: expected " + std::to_string(n) + "x" +
                             std::to_string(n) + ", got " + std::to_string(matrix.rows()) +
                             "x" + std::to_string(matrix.cols()));
  if (!matrix.all_finite()) throw InvalidObjectError("density matrix: non-finite entry");
  const double defect = hermiticity_defect(matrix);
  if (defect > 1e-10 * std::max(1.0, matrix.frobenius_norm()))
    throw InvalidObjectError("density matrix: not Hermitian (defect " + std::to_string(defect) +
                             ")");
  const Complex tr = matrix.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > 1e-10)
    throw InvalidObjectError("density matrix: trace " + std::to_string(tr.real()) + "+" +
                             std::to_string(tr.imag()) + "i is not 1");
  const Spectrum spec = hermitian_eigen(matrix, false);
  if (spec.eigenvalues.back() < -1e-9)
    throw InvalidObjectError("density matrix: not PSD (eigenvalue " +
                             std::to_string(spec.eigenvalues.back()) + ")");
  return DensityMatrix(dims, std::move(matrix));
}

DensityMatrix density_from_pure(const PureState& psi) {
  return DensityMatrix::make(psi.dims(), psi.density_matrix());
}

SchmidtData schmidt(const PureState& state) {
  const BipartiteDims dims = state.dims();
  const ComplexMatrix psi = state.coefficient_matrix();
  const std::size_t count = std::min(dims.d1, dims.d2);

  // omega and |u_k> from the reduced state psi psi^dagger; |v_k> pulled back
  // through psi, then completed to a unitary.
  const Spectrum spec = hermitian_eigen(psi * psi.adjoint(), true);
  const ComplexMatrix& u = *spec.eigenvectors;

  SchmidtData data;
  data.coefficients.resize(count);
  for (std::size_t k = 0; k < count; ++k)
    data.coefficients[k] = std::max(0.0, spec.eigenvalues[k]);

  ComplexMatrix v(dims.d2, dims.d2);
  std::size_t filled = 0;
  for (std::size_t k = 0; k < count && data.coefficients[k] > kRankCutoff; ++k, ++filled) {
    const double inv = 1.0 / std::sqrt(data.coefficients[k]);
    for (std::size_t j = 0; j < dims.d2; ++j) {
      Complex sum = 0.0;  // (psi^T conj(u_k))_j = sqrt(w_k) (v_k)_j
      for (std::size_t i = 0; i < dims.d1; ++i) sum += psi(i, j) * std::conj(u(i, k));
      v(j, k) = inv * sum;
    }
  }
  // Complete with the standard basis vector least covered by what is there.
  while (filled < dims.d2) {
    std::vector<Complex> best;
    double best_norm = -1.0;
    for (std::size_t cand = 0; cand < dims.d2; ++cand) {
      std::vector<Complex> col(dims.d2, Complex(0.0, 0.0));
      col[cand] = 1.0;
      for (std::size_t k = 0; k < filled; ++k) {
        Complex overlap = 0.0;
        for (std::size_t i = 0; i < dims.d2; ++i) overlap += std::conj(v(i, k)) * col[i];
        for (std::size_t i = 0; i < dims.d2; ++i) col[i] -= overlap * v(i, k);
      }
      double n = 0.0;
      for (const Complex& z : col) n += std::norm(z);
      n = std::sqrt(n);
      if (n > best_norm) {
        best_norm = n;
        best = std::move(col);
      }
    }
    for (std::size_t i = 0; i < dims.d2; ++i) v(i, filled) = best[i] / best_norm;
    ++filled;
  }
  data.basis_a = u;
  data.basis_b = gram_schmidt_columns(v);
  return data;
}

PureState max_entangled(std::size_t d) {
  if (d < 2) throw InvalidObjectError("max_entangled: dimension must be at least 2");
  std::vector<Complex> amps(d * d, Complex(0.0, 0.0));
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) amps[i * d + i] = a;
  return PureState::make(BipartiteDims{d, d}, std::move(amps));
}

DensityMatrix isotropic(std::size_t d, double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0))
    throw InvalidObjectError("isotropic: fidelity " + std::to_string(fidelity) +
                             " outside [0,1]");
  const std::size_t n = d * d;
  const PureState phi = max_entangled(d);
  const ComplexMatrix proj = phi.density_matrix();
  const double off = (1.0 - fidelity) / (static_cast<double>(n) - 1.0);
  ComplexMatrix m = off * ComplexMatrix::identity(n) + (fidelity - off) * proj;
  return DensityMatrix::make(BipartiteDims{d, d}, std::move(m));
}

DensityMatrix werner(std::size_t d, double mixing) {
  if (!(mixing >= -1.0 && mixing <= 1.0))
    throw InvalidObjectError("werner: mixing " + std::to_string(mixing) + " outside [-1,1]");
  const std::size_t n = d * d;
  ComplexMatrix m = ComplexMatrix::identity(n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i * d + j, j * d + i) -= mixing;
  const double norm = static_cast<double>(n) - mixing * static_cast<double>(d);
  m *= Complex(1.0 / norm, 0.0);
  return DensityMatrix::make(BipartiteDims{d, d}, std::move(m));
}

PureState haar_random_pure(BipartiteDims dims, std::uint64_t seed) {
  Rng rng(seed);
  return haar_random_pure(dims, rng);
}

PureState haar_random_pure(BipartiteDims dims, Rng& rng) {
  std::vector<Complex> amps(dims.total());
  for (Complex& z : amps) z = Complex(rng.gaussian(), rng.gaussian());
  const double n = norm2(amps);
  for (Complex& z : amps) z /= n;
  return PureState::make(dims, std::move(amps));
}

ComplexMatrix haar_random_unitary(std::size_t d, Rng& rng) {
  ComplexMatrix g(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return gram_schmidt_columns(g);
}

DensityMatrix random_mixed(BipartiteDims dims, std::size_t rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_mixed(dims, rank, rng);
}

DensityMatrix random_mixed(BipartiteDims dims, std::size_t rank, Rng& rng) {
  const std::size_t n = dims.total();
  if (rank < 1 || rank > n)
    throw InvalidObjectError("random_mixed: rank " + std::to_string(rank) +
                             " outside [1, " + std::to_string(n) + "]");
  ComplexMatrix m(n, n);
  for (std::size_t k = 0; k < rank; ++k) {
    std::vector<Complex> g(n);
    for (Complex& z : g) z = Complex(rng.gaussian(), rng.gaussian());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) += g[i] * std::conj(g[j]);
  }
  const double tr = m.trace().real();
  m *= Complex(1.0 / tr, 0.0);
  // Exact Hermitian symmetrization; the sum above is Hermitian up to roundoff.
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = Complex(m(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return DensityMatrix::make(dims, std::move(m));
}

ComplexMatrix gram_schmidt_columns(const ComplexMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  ComplexMatrix q = m;
  for (std::size_t j = 0; j < cols; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex overlap = 0.0;
        for (std::size_t i = 0; i < rows; ++i) overlap += std::conj(q(i, k)) * q(i, j);
        for (std::size_t i = 0; i < rows; ++i) q(i, j) -= overlap * q(i, k);
      }
    }
    double n = 0.0;
    for (std::size_t i = 0; i < rows; ++i) n += std::norm(q(i, j));
    n = std::sqrt(n);
    if (n < 1e-12)
      throw InvalidObjectError("gram_schmidt_columns: rank-deficient input at column " +
                               std::to_string(j));
    for (std::size_t i = 0; i < rows; ++i) q(i, j) /= n;
  }
  return q;
}

}  // namespace qtau
