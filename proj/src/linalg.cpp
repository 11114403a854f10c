#include "qtau/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "qtau/errors.hpp"

namespace qtau {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_square(const ComplexMatrix& m, const char* who) {
  if (!m.is_square()) {
    throw InvalidObjectError(std::string(who) + ": matrix is not square (" +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")");
  }
}

void require_hermitian(const ComplexMatrix& m, const char* who, double tol) {
  require_square(m, who);
  const double scale = std::max(1.0, m.frobenius_norm());
  const double defect = hermiticity_defect(m);
  if (defect > tol * scale) {
    throw InvalidObjectError(std::string(who) + ": matrix is not Hermitian (defect " +
                             std::to_string(defect) + ", tolerance " +
                             std::to_string(tol * scale) + ")");
  }
}

double offdiag_frobenius(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  ComplexMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw InvalidObjectError("from_rows: ragged row lengths");
    std::size_t j = 0;
    for (Complex z : row) m(i, j++) = z;
    ++i;
  }
  if (!m.all_finite()) throw InvalidObjectError("from_rows: non-finite entry");
  return m;
}

ComplexMatrix ComplexMatrix::from_data(std::size_t rows, std::size_t cols,
                                       std::vector<Complex> data) {
  if (data.size() != rows * cols)
    throw InvalidObjectError("from_data: entry count " + std::to_string(data.size()) +
                             " does not match " + std::to_string(rows) + "x" +
                             std::to_string(cols));
  ComplexMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = std::move(data);
  if (!m.all_finite()) throw InvalidObjectError("from_data: non-finite entry");
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = std::conj((*this)(i, j));
  return m;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Complex& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double s = 0.0;
  for (const Complex& z : data_) s = std::max(s, std::abs(z));
  return s;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](Complex z) { return finite(z); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw InvalidObjectError("matrix add: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw InvalidObjectError("matrix sub: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (Complex& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidObjectError("matrix mul: inner dimension mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
ComplexMatrix operator*(double s, ComplexMatrix m) { return m *= Complex(s, 0.0); }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidObjectError("max_abs_diff: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s = std::max(s, std::abs(a(i, j) - b(i, j)));
  return s;
}

double hermiticity_defect(const ComplexMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      s = std::max(s, std::abs(m(i, j) - std::conj(m(j, i))));
  return s;
}

Spectrum hermitian_eigen(const ComplexMatrix& m, bool want_vectors) {
  require_hermitian(m, "hermitian_eigen", 1e-10);
  const std::size_t n = m.rows();
  const double norm = m.frobenius_norm();

  ComplexMatrix a = m;
  // Symmetrize away the (tolerated) Hermitian defect so rotations see an
  // exactly Hermitian matrix.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = Complex(a(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }

  ComplexMatrix v = ComplexMatrix::identity(n);
  const double tol = 1e-12 * norm;
  bool converged = offdiag_frobenius(a) <= tol;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        const Complex phase = apq / mag;
        const double beta = (a(p, p).real() - a(q, q).real()) / (2.0 * mag);
        double t;
        if (beta == 0.0) {
          t = 1.0;
        } else {
          t = (beta > 0.0 ? 1.0 : -1.0) / (std::abs(beta) + std::sqrt(1.0 + beta * beta));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex sp = s * phase;         // s * e^{i phi}
        const Complex spc = std::conj(sp);    // s * e^{-i phi}

        // Rows p,q of U^dagger * A.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk + sp * aqk;
          a(q, k) = -spc * apk + c * aqk;
        }
        // Columns p,q of (U^dagger A) * U.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp + spc * akq;
          a(k, q) = -sp * akp + c * akq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(q, q) = Complex(a(q, q).real(), 0.0);
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const Complex vkp = v(k, p);
            const Complex vkq = v(k, q);
            v(k, p) = c * vkp + spc * vkq;
            v(k, q) = -sp * vkp + c * vkq;
          }
        }
      }
    }
    converged = offdiag_frobenius(a) <= tol;
  }
  if (!converged) throw InvariantViolation("hermitian_eigen: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

  Spectrum spec;
  spec.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) spec.eigenvalues[i] = a(order[i], order[i]).real();
  if (want_vectors) {
    ComplexMatrix sorted(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) sorted(i, j) = v(i, order[j]);
    spec.eigenvectors = std::move(sorted);
  }
  return spec;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  require_hermitian(m, "psd_sqrt", 1e-9);
  const std::size_t n = m.rows();
  const double scale = std::max(1.0, m.frobenius_norm());
  Spectrum spec = hermitian_eigen(m, true);
  const ComplexMatrix& v = *spec.eigenvectors;

  ComplexMatrix result(n, n);
  std::vector<double> roots(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lam = spec.eigenvalues[i];
    if (lam < -1e-9 * scale) {
      throw InvalidObjectError("psd_sqrt: matrix is not PSD (eigenvalue " +
                               std::to_string(lam) + ")");
    }
    roots[i] = std::sqrt(std::max(0.0, lam));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) sum += v(i, k) * roots[k] * std::conj(v(j, k));
      result(i, j) = sum;
    }
  return result;
}

std::vector<double> svd_values(const ComplexMatrix& m) {
  if (!m.all_finite()) throw InvalidObjectError("svd_values: non-finite entry");
  const ComplexMatrix gram = m.adjoint() * m;
  Spectrum spec = hermitian_eigen(gram, false);
  const std::size_t count = std::min(m.rows(), m.cols());
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i)
    values[i] = std::sqrt(std::max(0.0, spec.eigenvalues[i]));
  return values;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

std::vector<double> quartic_spectrum_oracle(const ComplexMatrix& m) {
  if (m.rows() != 4 || m.cols() != 4)
    throw InvalidObjectError("quartic_spectrum_oracle: expected a 4x4 matrix, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  if (!m.all_finite()) throw InvalidObjectError("quartic_spectrum_oracle: non-finite entry");

  // Newton identities: power sums -> elementary symmetric polynomials.
  const ComplexMatrix m2 = m * m;
  const ComplexMatrix m3 = m2 * m;
  const ComplexMatrix m4 = m3 * m;
  const Complex p1 = m.trace();
  const Complex p2 = m2.trace();
  const Complex p3 = m3.trace();
  const Complex p4 = m4.trace();
  const Complex e1 = p1;
  const Complex e2 = (e1 * p1 - p2) / 2.0;
  const Complex e3 = (e2 * p1 - e1 * p2 + p3) / 3.0;
  const Complex e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4.0;

  // Monic quartic: z^4 - e1 z^3 + e2 z^2 - e3 z + e4.
  const std::array<Complex, 5> coeff = {Complex(1.0), -e1, e2, -e3, e4};

  double radius = 0.0;
  for (int k = 1; k <= 4; ++k)
    radius = std::max(radius, std::pow(std::abs(coeff[static_cast<std::size_t>(k)]),
                                       1.0 / static_cast<double>(k)));
  if (radius < 1e-300) return {0.0, 0.0, 0.0, 0.0};
  radius = 2.0 * std::max(radius, 1e-30);

  auto eval = [&coeff](Complex z) {
    Complex r = coeff[0];
    for (int k = 1; k <= 4; ++k) r = r * z + coeff[static_cast<std::size_t>(k)];
    return r;
  };

  // Durand-Kerner from staggered starting points.
  std::array<Complex, 4> z;
  const Complex seed(0.4, 0.9);
  Complex pw = seed;
  for (int i = 0; i < 4; ++i) {
    z[static_cast<std::size_t>(i)] = radius * pw;
    pw *= seed;
  }
  for (int iter = 0; iter < 2000; ++iter) {
    double max_step = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      Complex denom = 1.0;
      for (std::size_t j = 0; j < 4; ++j) {
        if (j == i) continue;
        Complex d = z[i] - z[j];
        if (std::abs(d) < 1e-30) d = Complex(1e-30, 0.0);
        denom *= d;
      }
      const Complex step = eval(z[i]) / denom;
      z[i] -= step;
      max_step = std::max(max_step, std::abs(step));
    }
    if (max_step < 1e-15 * std::max(1.0, radius)) break;
  }

  std::vector<double> roots;
  roots.reserve(4);
  for (const Complex& root : z) {
    const double bound = 1e-6 * std::max(1.0, std::abs(root));
    if (std::abs(root.imag()) > bound) {
      throw InvalidObjectError("quartic_spectrum_oracle: unexpected complex eigenvalue (" +
                               std::to_string(root.real()) + ", " +
                               std::to_string(root.imag()) + "i)");
    }
    roots.push_back(root.real());
  }
  std::sort(roots.begin(), roots.end(), std::greater<double>());
  return roots;
}

}  // namespace qtau
