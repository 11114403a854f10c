#ifndef QTAU_CHANNELS_HPP
#define QTAU_CHANNELS_HPP

#include <vector>

#include "qtau/linalg.hpp"
#include "qtau/rng.hpp"
#include "qtau/states.hpp"

namespace qtau {

/// Completely positive map on one d-dimensional subsystem, stored as a set
/// of d x d Kraus operators. `make` enforces trace preservation
/// (sum K^dagger K = 1 to 1e-9); `make_cp` accepts any Kraus set, which is
/// how sub-normalized (non-trace-preserving) maps travel through the same
/// code paths.
class QuantumChannel {
 public:
  static QuantumChannel make(std::size_t dim, std::vector<ComplexMatrix> kraus);
  static QuantumChannel make_cp(std::size_t dim, std::vector<ComplexMatrix> kraus);

  std::size_t dim() const { return dim_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  bool trace_preserving() const { return trace_preserving_; }

  /// Raw action sum_k K rho K^dagger on a dim x dim matrix.
  ComplexMatrix apply(const ComplexMatrix& rho) const;

 private:
  QuantumChannel(std::size_t dim, std::vector<ComplexMatrix> kraus, bool tp)
      : dim_(dim), kraus_(std::move(kraus)), trace_preserving_(tp) {}
  std::size_t dim_;
  std::vector<ComplexMatrix> kraus_;
  bool trace_preserving_;
};

/// E(rho) = (1-eps) rho + eps 1/d, realized by the identity plus the d^2-1
/// Weyl shift-and-clock unitaries.
QuantumChannel depolarizing(std::size_t d, double eps);

/// E(rho) = (1-eps) rho + eps sum_i rho_ii |i><i|.
QuantumChannel phase_damping(std::size_t d, double eps);

/// Trace-preserving channel with `kraus_count` Haar-random Kraus operators
/// (blocks of a random isometry).
QuantumChannel random_channel(std::size_t d, std::size_t kraus_count, Rng& rng);

/// Channel applied to subsystem B: sum_k (1 (x) K_k) rho (1 (x) K_k)^dagger.
/// Works on raw matrices so sub-normalized intermediates can flow through.
ComplexMatrix apply_one_sided_raw(const QuantumChannel& ch, const ComplexMatrix& rho,
                                  std::size_t d1);

/// Same action on a validated density matrix; requires ch.dim == dims.d2 and
/// a trace-preserving channel.
DensityMatrix apply_one_sided(const QuantumChannel& ch, const DensityMatrix& rho);

/// State dual to a channel: (1 (x) E) applied to the maximally entangled
/// state, stored normalized together with the pre-normalization trace
/// (1 for trace-preserving channels).
struct ChoiState {
  DensityMatrix state;
  std::size_t channel_dim;
  double norm;  // p'': trace of the unnormalized dual state
};

ChoiState choi(const QuantumChannel& ch);

/// Output of the filtering picture: the local filter built from Schmidt
/// coefficients applied to the channel's dual state, normalized, plus the
/// three normalization scalars tied by p' = d^2 p p''.
struct FilterResult {
  DensityMatrix state;
  double p;         // trace of the filtered (unnormalized) dual state
  double p_prime;   // d^2 * p * p''; equals tr (1 (x) E)|psi><psi|
  double p_dprime;  // dual-state normalization from the ChoiState
};

FilterResult filter_map(const SchmidtData& omega, const ChoiState& choi_state);

}  // namespace qtau

#endif
