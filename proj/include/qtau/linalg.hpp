#ifndef QTAU_LINALG_HPP
#define QTAU_LINALG_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

namespace qtau {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Sized for the small (<~100) Hermitian
/// problems this library works with; everything is by value.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

  static ComplexMatrix identity(std::size_t n);
  // Validates finiteness of every entry.
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  static ComplexMatrix from_data(std::size_t rows, std::size_t cols, std::vector<Complex> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<Complex>& data() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex s);

  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix m);
ComplexMatrix operator*(double s, ComplexMatrix m);

/// Largest entry of |a - b|.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hermitian deviation: largest entry of |m - m^dagger|.
double hermiticity_defect(const ComplexMatrix& m);

/// Eigenvalues (descending) and, on request, a matrix whose columns are the
/// matching orthonormal eigenvectors.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::optional<ComplexMatrix> eigenvectors;
};

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
/// Converges when the off-diagonal Frobenius mass drops below
/// 1e-12 * ||m||_F (at most 100 sweeps).
Spectrum hermitian_eigen(const ComplexMatrix& m, bool want_vectors);

/// Hermitian PSD square root. Eigenvalues in [-1e-9, 0) (relative to
/// max(1, ||m||_F)) are clamped to zero; anything below that is rejected.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

/// Singular values, descending, min(rows, cols) of them, computed from the
/// spectrum of m^dagger m.
std::vector<double> svd_values(const ComplexMatrix& m);

/// Kronecker product.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Roots of the characteristic polynomial of a 4x4 matrix expected to carry
/// a real nonnegative spectrum (a product of two PSD factors). Uses Newton
/// identities plus Durand-Kerner iteration, so it shares no code path with
/// the Jacobi solver. Roots are returned descending; a root with
/// |imag| > 1e-6 * max(1, |root|) is an error.
std::vector<double> quartic_spectrum_oracle(const ComplexMatrix& m);

}  // namespace qtau

#endif
