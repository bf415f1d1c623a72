#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "corrpic/errors.hpp"

namespace corrpic {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

/// Relative eigenvalue cutoff used for rank decisions on density matrices.
inline constexpr double kDefaultRankCutoff = 1e-12;

/**
 * Dense complex matrix, row-major.
 *
 * Value type: copies are deep, all operations are pure.
 */
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Row-major initializer; size must equal rows*cols.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::initializer_list<cplx> values);

  static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n, n); }
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> d);
  static ComplexMatrix diagonal(std::span<const cplx> d);
  /// |i><j| on an n-dimensional space.
  static ComplexMatrix unit(std::size_t n, std::size_t i, std::size_t j);
  /// |v><w|
  static ComplexMatrix outer(std::span<const cplx> v, std::span<const cplx> w);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  cplx* data() noexcept { return data_.data(); }
  const cplx* data() const noexcept { return data_.data(); }
  std::span<const cplx> values() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);
  ComplexMatrix& operator/=(cplx s);
  /// this += s * o, without a temporary.
  ComplexMatrix& add_scaled(const ComplexMatrix& o, cplx s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator/(ComplexMatrix a, cplx s);
ComplexVector operator*(const ComplexMatrix& a, std::span<const cplx> v);

/// Bipartite split of a joint Hilbert space, system index outermost.
struct BipartiteDims {
  std::size_t d_s = 1;
  std::size_t d_b = 1;
  std::size_t joint() const noexcept { return d_s * d_b; }
  friend bool operator==(const BipartiteDims&, const BipartiteDims&) = default;
};

enum class TraceOver { S, B };

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// Tr_S or Tr_B of a joint operator with side d_s*d_b.
ComplexMatrix partial_trace(const ComplexMatrix& m, BipartiteDims dims, TraceOver side);

/// Tr[a^dagger b]
cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);
/// (m + m^dagger)/2
ComplexMatrix hermitize(const ComplexMatrix& m);
/// ||m - m^dagger||_F
double hermiticity_residual(const ComplexMatrix& m);
/// Tr[a b] without forming the product.
cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigenDecomposition {
  std::vector<double> values;  ///< ascending
  ComplexMatrix vectors;       ///< eigenvectors as columns
  std::size_t sweeps = 0;
};

/// Cyclic complex Jacobi. Input must be Hermitian to 1e-10 (relative to its norm).
EigenDecomposition hermitian_eig(const ComplexMatrix& m);
/// V diag(f(lambda)) V^dagger
ComplexMatrix spectral_apply(const EigenDecomposition& eig, std::span<const cplx> f);

/// exp(m) for anti-Hermitian m (= -i t H); throws otherwise.
ComplexMatrix matrix_exp(const ComplexMatrix& m);
/// exp(-i h t) for Hermitian h.
ComplexMatrix propagator(const ComplexMatrix& h, double t);

/// Reusable exp(-i h t) from a single eigendecomposition.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const ComplexMatrix& h);
  ComplexMatrix at(double t) const;
  const EigenDecomposition& eigen() const noexcept { return eig_; }

 private:
  EigenDecomposition eig_;
};

/// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix via its spectrum.
ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rank_cutoff = kDefaultRankCutoff);
/// Orthogonal projector onto eigenvectors with eigenvalue <= cutoff * lambda_max.
ComplexMatrix null_projector(const ComplexMatrix& m, double rank_cutoff = kDefaultRankCutoff);

void require_square(const ComplexMatrix& m, const char* what);
void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what);

}  // namespace corrpic
