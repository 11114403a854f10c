#include "qtau/channels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qtau/errors.hpp"

namespace qtau {

namespace {

void check_kraus_shapes(std::size_t dim, const std::vector<ComplexMatrix>& kraus) {
  if (dim < 2) throw InvalidObjectError("channel: dimension must be at least 2");
  if (kraus.empty()) throw InvalidObjectError("channel: need at least one Kraus operator");
  for (const ComplexMatrix& k : kraus) {
    if (k.rows() != dim || k.cols() != dim)
      throw InvalidObjectError("channel: Kraus operator is " + std::to_string(k.rows()) + "x" +
                               std::to_string(k.cols()) + ", expected " + std::to_string(dim) +
                               "x" + std::to_string(dim));
    if (!k.all_finite()) throw InvalidObjectError("channel: non-finite Kraus entry");
  }
}

ComplexMatrix kraus_gram(std::size_t dim, const std::vector<ComplexMatrix>& kraus) {
  ComplexMatrix sum(dim, dim);
  for (const ComplexMatrix& k : kraus) sum += k.adjoint() * k;
  return sum;
}

}  // namespace

QuantumChannel QuantumChannel::make(std::size_t dim, std::vector<ComplexMatrix> kraus) {
  check_kraus_shapes(dim, kraus);
  const double defect = max_abs_diff(kraus_gram(dim, kraus), ComplexMatrix::identity(dim));
  if (defect > 1e-9)
    throw InvalidObjectError("channel: Kraus set is not trace-preserving (defect " +
                             std::to_string(defect) + ")");
  return QuantumChannel(dim, std::move(kraus), true);
}

QuantumChannel QuantumChannel::make_cp(std::size_t dim, std::vector<ComplexMatrix> kraus) {
  check_kraus_shapes(dim, kraus);
  const double defect = max_abs_diff(kraus_gram(dim, kraus), ComplexMatrix::identity(dim));
  return QuantumChannel(dim, std::move(kraus), defect <= 1e-9);
}

ComplexMatrix QuantumChannel::apply(const ComplexMatrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_)
    throw InvalidObjectError("channel apply: input is " + std::to_string(rho.rows()) + "x" +
                             std::to_string(rho.cols()) + ", channel dimension is " +
                             std::to_string(dim_));
  ComplexMatrix out(dim_, dim_);
  for (const ComplexMatrix& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

QuantumChannel depolarizing(std::size_t d, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw InvalidObjectError("depolarizing: eps " + std::to_string(eps) + " outside [0,1]");
  const double dd = static_cast<double>(d);
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(d * d);
  ComplexMatrix id = ComplexMatrix::identity(d);
  id *= Complex(std::sqrt(1.0 - eps + eps / (dd * dd)), 0.0);
  kraus.push_back(std::move(id));

  const double w = std::sqrt(eps) / dd;
  if (w > 0.0) {
    const double tau = 2.0 * std::numbers::pi / dd;
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        if (a == 0 && b == 0) continue;
        // Weyl unitary X^a Z^b: |j> -> exp(2 pi i b j / d) |j+a mod d>.
        ComplexMatrix op(d, d);
        for (std::size_t j = 0; j < d; ++j) {
          const double angle = tau * static_cast<double>(b) * static_cast<double>(j);
          op((j + a) % d, j) = w * Complex(std::cos(angle), std::sin(angle));
        }
        kraus.push_back(std::move(op));
      }
    }
  }
  return QuantumChannel::make(d, std::move(kraus));
}

QuantumChannel phase_damping(std::size_t d, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw InvalidObjectError("phase_damping: eps " + std::to_string(eps) + " outside [0,1]");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(d + 1);
  ComplexMatrix id = ComplexMatrix::identity(d);
  id *= Complex(std::sqrt(1.0 - eps), 0.0);
  kraus.push_back(std::move(id));
  const double w = std::sqrt(eps);
  if (w > 0.0) {
    for (std::size_t i = 0; i < d; ++i) {
      ComplexMatrix proj(d, d);
      proj(i, i) = w;
      kraus.push_back(std::move(proj));
    }
  }
  return QuantumChannel::make(d, std::move(kraus));
}

QuantumChannel random_channel(std::size_t d, std::size_t kraus_count, Rng& rng) {
  if (kraus_count < 1) throw InvalidObjectError("random_channel: need at least one operator");
  // Columns of a Haar-random (kd) x d isometry, cut into d x d blocks.
  ComplexMatrix tall(kraus_count * d, d);
  for (std::size_t i = 0; i < tall.rows(); ++i)
    for (std::size_t j = 0; j < d; ++j) tall(i, j) = Complex(rng.gaussian(), rng.gaussian());
  const ComplexMatrix iso = gram_schmidt_columns(tall);
  std::vector<ComplexMatrix> kraus(kraus_count, ComplexMatrix(d, d));
  for (std::size_t k = 0; k < kraus_count; ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) kraus[k](i, j) = iso(k * d + i, j);
  return QuantumChannel::make(d, std::move(kraus));
}

ComplexMatrix apply_one_sided_raw(const QuantumChannel& ch, const ComplexMatrix& rho,
                                  std::size_t d1) {
  const std::size_t d2 = ch.dim();
  const std::size_t n = d1 * d2;
  if (rho.rows() != n || rho.cols() != n)
    throw InvalidObjectError("apply_one_sided: state is " + std::to_string(rho.rows()) + "x" +
                             std::to_string(rho.cols()) + ", expected " + std::to_string(n) +
                             "x" + std::to_string(n));
  // rho as a d1 x d1 grid of d2 x d2 blocks; each block maps through E.
  ComplexMatrix out(n, n);
  ComplexMatrix block(d2, d2);
  for (std::size_t bi = 0; bi < d1; ++bi) {
    for (std::size_t bj = 0; bj < d1; ++bj) {
      for (std::size_t i = 0; i < d2; ++i)
        for (std::size_t j = 0; j < d2; ++j) block(i, j) = rho(bi * d2 + i, bj * d2 + j);
      const ComplexMatrix mapped = ch.apply(block);
      for (std::size_t i = 0; i < d2; ++i)
        for (std::size_t j = 0; j < d2; ++j) out(bi * d2 + i, bj * d2 + j) = mapped(i, j);
    }
  }
  return out;
}

DensityMatrix apply_one_sided(const QuantumChannel& ch, const DensityMatrix& rho) {
  if (ch.dim() != rho.dims().d2)
    throw InvalidObjectError("apply_one_sided: channel dimension " + std::to_string(ch.dim()) +
                             " does not match subsystem B dimension " +
                             std::to_string(rho.dims().d2));
  ComplexMatrix out = apply_one_sided_raw(ch, rho.matrix(), rho.dims().d1);
  if (!ch.trace_preserving()) {
    const double tr = out.trace().real();
    if (tr <= 0.0) throw InvalidObjectError("apply_one_sided: output trace is not positive");
    out *= Complex(1.0 / tr, 0.0);
  }
  return DensityMatrix::make(rho.dims(), std::move(out));
}

ChoiState choi(const QuantumChannel& ch) {
  const std::size_t d = ch.dim();
  const PureState phi = max_entangled(d);
  ComplexMatrix raw = apply_one_sided_raw(ch, phi.density_matrix(), d);
  const double p_dprime = raw.trace().real();
  if (p_dprime <= 0.0) throw InvalidObjectError("choi: dual state has nonpositive trace");
  raw *= Complex(1.0 / p_dprime, 0.0);
  return ChoiState{DensityMatrix::make(BipartiteDims{d, d}, std::move(raw)), d, p_dprime};
}

FilterResult filter_map(const SchmidtData& omega, const ChoiState& choi_state) {
  const std::size_t d = choi_state.channel_dim;
  if (omega.coefficients.size() != d)
    throw InvalidObjectError("filter_map: " + std::to_string(omega.coefficients.size()) +
                             " Schmidt coefficients for channel dimension " +
                             std::to_string(d));
  const double dd = static_cast<double>(d);
  // M = (1/sqrt(d)) sum_i sqrt(w_i) |i><i| acting on subsystem A.
  const std::size_t n = d * d;
  const ComplexMatrix& rho_e = choi_state.state.matrix();
  ComplexMatrix filtered(n, n);
  for (std::size_t i = 0; i < d; ++i) {
    const double mi = std::sqrt(std::max(0.0, omega.coefficients[i]) / dd);
    for (std::size_t ib = 0; ib < d; ++ib)
      for (std::size_t j = 0; j < d; ++j) {
        const double mj = std::sqrt(std::max(0.0, omega.coefficients[j]) / dd);
        for (std::size_t jb = 0; jb < d; ++jb)
          filtered(i * d + ib, j * d + jb) = mi * mj * rho_e(i * d + ib, j * d + jb);
      }
  }
  const double p = filtered.trace().real();
  if (p <= 0.0)
    throw InvalidObjectError("filter_map: filtered state has nonpositive trace");
  filtered *= Complex(1.0 / p, 0.0);
  return FilterResult{DensityMatrix::make(BipartiteDims{d, d}, std::move(filtered)), p,
                      dd * dd * p * choi_state.norm, choi_state.norm};
}

}  // namespace qtau
