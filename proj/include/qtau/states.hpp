#ifndef QTAU_STATES_HPP
#define QTAU_STATES_HPP

#include <cstdint>
#include <vector>

#include "qtau/linalg.hpp"
#include "qtau/rng.hpp"

namespace qtau {

/// Subsystem dimensions of a bipartite space; both sides at least 2.
struct BipartiteDims {
  std::size_t d1 = 2;
  std::size_t d2 = 2;

  std::size_t total() const { return d1 * d2; }
  bool operator==(const BipartiteDims&) const = default;
};

BipartiteDims checked_dims(std::size_t d1, std::size_t d2);

/// Schmidt form of a bipartite pure state: coefficients (descending,
/// summing to one) and the two local bases as unitary matrices whose
/// columns are the Schmidt vectors.
struct SchmidtData {
  std::vector<double> coefficients;
  ComplexMatrix basis_a;
  ComplexMatrix basis_b;

  /// Coefficients above the rank cutoff (1e-12).
  std::size_t rank() const;
};

/// Normalized bipartite pure state. Amplitude index i*d2 + j <-> |ij>,
/// subsystem A first.
class PureState {
 public:
  static PureState make(BipartiteDims dims, std::vector<Complex> amplitudes);
  /// Builds sum_i sqrt(w_i) |ii> from nonnegative coefficients (normalized
  /// here if needed); requires length <= min(d1,d2) when dims are given
  /// explicitly, else a square d x d space.
  static PureState from_schmidt_coefficients(const std::vector<double>& omega);

  const BipartiteDims& dims() const { return dims_; }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  Complex amplitude(std::size_t i, std::size_t j) const { return amps_[i * dims_.d2 + j]; }

  /// Amplitudes reshaped into the d1 x d2 coefficient matrix.
  ComplexMatrix coefficient_matrix() const;
  /// Reduced state on subsystem A.
  ComplexMatrix reduced_a() const;
  ComplexMatrix density_matrix() const;

 private:
  PureState(BipartiteDims dims, std::vector<Complex> amps)
      : dims_(dims), amps_(std::move(amps)) {}
  BipartiteDims dims_;
  std::vector<Complex> amps_;
};

/// Trace-one PSD Hermitian matrix on a bipartite space.
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-10), unit trace (1e-10) and PSD-ness
  /// (eigenvalues >= -1e-9).
  static DensityMatrix make(BipartiteDims dims, ComplexMatrix matrix);

  const BipartiteDims& dims() const { return dims_; }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  DensityMatrix(BipartiteDims dims, ComplexMatrix m) : dims_(dims), m_(std::move(m)) {}
  BipartiteDims dims_;
  ComplexMatrix m_;
};

DensityMatrix density_from_pure(const PureState& psi);

/// Schmidt decomposition via the spectral decomposition of the reduced
/// state; coefficients descending, degenerate blocks kept in solver order.
SchmidtData schmidt(const PureState& state);

/// (1/sqrt(d)) sum_i |ii>.
PureState max_entangled(std::size_t d);

/// Isotropic family: rho_F = (1-F)/(d^2-1) (1 - P+) + F P+, where P+ projects
/// onto the maximally entangled state and F is the fidelity with it.
DensityMatrix isotropic(std::size_t d, double fidelity);

/// Werner family rho_W = (1 - mu SWAP) / (d^2 - d mu), mu in [-1, 1].
DensityMatrix werner(std::size_t d, double mixing);

/// Haar-random pure state (normalized Gaussian vector), deterministic per seed.
PureState haar_random_pure(BipartiteDims dims, std::uint64_t seed);
PureState haar_random_pure(BipartiteDims dims, Rng& rng);

/// Haar-random unitary: Gram-Schmidt of a square Gaussian matrix.
ComplexMatrix haar_random_unitary(std::size_t d, Rng& rng);

/// rho = sum_k g_k g_k^dagger / norm over `rank` Gaussian vectors.
DensityMatrix random_mixed(BipartiteDims dims, std::size_t rank, std::uint64_t seed);
DensityMatrix random_mixed(BipartiteDims dims, std::size_t rank, Rng& rng);

/// Orthonormalizes the columns of a full-column-rank matrix (modified
/// Gram-Schmidt with one re-orthogonalization pass).
ComplexMatrix gram_schmidt_columns(const ComplexMatrix& m);

}  // namespace qtau

#endif
