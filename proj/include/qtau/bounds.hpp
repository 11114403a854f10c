#ifndef QTAU_BOUNDS_HPP
#define QTAU_BOUNDS_HPP

#include <cstdint>
#include <vector>

#include "qtau/states.hpp"

namespace qtau {

/// One level pair per side: (p, r) on A with p < r, (pp, rp) on B with
/// pp < rp. Picks the 4x4 submatrix spanned by |p pp>, |p rp>, |r pp>, |r rp>.
struct ComponentIndex {
  std::size_t p = 0, r = 1;
  std::size_t pp = 0, rp = 1;

  bool operator==(const ComponentIndex&) const = default;
};

/// All component indices for the given dimensions, lexicographic in
/// (p, r, pp, rp).
std::vector<ComponentIndex> component_indices(const BipartiteDims& dims);

struct ComponentValue {
  ComponentIndex index;
  double concurrence = 0.0;
};

/// The lower bound of squared concurrence and the per-component breakdown:
/// total = sum of squared component concurrences.
struct TauBreakdown {
  double total = 0.0;
  std::vector<ComponentValue> components;
};

/// Two-qubit-style concurrence max{0, l1 - l2 - l3 - l4} of the 4x4
/// submatrix selected by `idx`, the l_i being the descending square roots
/// of the eigenvalues of rho~ (sy (x) sy) rho~* (sy (x) sy). The spectrum is
/// taken through the Hermitian similarity sqrt(A) B sqrt(A).
double component_concurrence(const DensityMatrix& rho, const ComponentIndex& idx);

/// Same quantity through the full-space generator construction
/// (L_pr (x) L_pprp) rho* (L_pr (x) L_pprp) and the spectrum of
/// sqrt(rho) rho~ sqrt(rho); kept as an algebraically independent route.
double component_concurrence_generators(const DensityMatrix& rho, const ComponentIndex& idx);

/// The 4x4 level-pair submatrix (rows/cols ordered pp', pr', rp', rr').
ComplexMatrix component_submatrix(const ComplexMatrix& rho, const BipartiteDims& dims,
                                  const ComponentIndex& idx);

/// The spin-flipped partner (sy (x) sy) m* (sy (x) sy) of a 4x4 block.
ComplexMatrix spin_flip_4(const ComplexMatrix& m);

TauBreakdown tau(const DensityMatrix& rho);

/// sqrt(2 (1 - Tr rho_A^2)).
double pure_concurrence(const PureState& psi);

/// Closed form for isotropic states: 0 for F <= 1/d, else
/// (2d/(d-1)) (F - 1/d)^2. Agrees with tau() on isotropic inputs.
double isotropic_tau(std::size_t d, double fidelity);

/// Monte Carlo upper estimate of the tangle (convex roof of squared pure
/// concurrence): minimum of sum_i p_i C^2(psi_i) over random-isometry
/// mixings of the eigen-ensemble, sizes rank..rank+2. Never below the true
/// tangle.
double tangle_upper_estimate(const DensityMatrix& rho, std::size_t trials, std::uint64_t seed);

}  // namespace qtau

#endif
