#include "corrpic/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace corrpic {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::initializer_list<cplx> values)
    : rows_(rows), cols_(cols), data_(values) {
  if (data_.size() != rows * cols) {
    throw DimensionError("ComplexMatrix: initializer size does not match shape");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::unit(std::size_t n, std::size_t i, std::size_t j) {
  ComplexMatrix m(n, n);
  m(i, j) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> v, std::span<const cplx> w) {
  ComplexMatrix m(v.size(), w.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix r = *this;
  for (auto& x : r.data_) x = std::conj(x);
  return r;
}

cplx ComplexMatrix::trace() const {
  require_square(*this, "trace");
  cplx t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator/=(cplx s) {
  for (auto& x : data_) x /= s;
  return *this;
}

ComplexMatrix& ComplexMatrix::add_scaled(const ComplexMatrix& o, cplx s) {
  require_same_shape(*this, o, "add_scaled");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator/(ComplexMatrix a, cplx s) { return a /= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
  const std::size_t n = a.rows(), m = a.cols(), p = b.cols();
  ComplexMatrix c(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    cplx* ci = c.data() + i * p;
    for (std::size_t k = 0; k < m; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{0.0, 0.0}) continue;
      const cplx* bk = b.data() + k * p;
      for (std::size_t j = 0; j < p; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

ComplexVector operator*(const ComplexMatrix& a, std::span<const cplx> v) {
  if (a.cols() != v.size()) throw DimensionError("matrix-vector product: size mismatch");
  ComplexVector r(a.rows(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r[i] += a(i, j) * v[j];
  return r;
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.is_square()) throw DimensionError(std::string(what) + ": matrix is not square");
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(what) + ": shape mismatch");
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  ComplexMatrix r(ar * br, ac * bc);
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{0.0, 0.0}) continue;
      for (std::size_t k = 0; k < br; ++k)
        for (std::size_t l = 0; l < bc; ++l) r(i * br + k, j * bc + l) = aij * b(k, l);
    }
  return r;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, BipartiteDims dims, TraceOver side) {
  require_square(m, "partial_trace");
  if (m.rows() != dims.joint()) throw DimensionError("partial_trace: side != d_s*d_b");
  const std::size_t ds = dims.d_s, db = dims.d_b;
  if (side == TraceOver::B) {
    ComplexMatrix r(ds, ds);
    for (std::size_t i = 0; i < ds; ++i)
      for (std::size_t j = 0; j < ds; ++j) {
        cplx s = 0.0;
        for (std::size_t b = 0; b < db; ++b) s += m(i * db + b, j * db + b);
        r(i, j) = s;
      }
    return r;
  }
  ComplexMatrix r(db, db);
  for (std::size_t s = 0; s < ds; ++s)
    for (std::size_t a = 0; a < db; ++a)
      for (std::size_t b = 0; b < db; ++b) r(a, b) += m(s * db + a, s * db + b);
  return r;
}

cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hs_inner");
  cplx s = 0.0;
  const cplx* pa = a.data();
  const cplx* pb = b.data();
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(pa[k]) * pb[k];
  return s;
}

cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) throw DimensionError("trace_product: shape mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, i);
  return s;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b + b * a; }

ComplexMatrix hermitize(const ComplexMatrix& m) {
  require_square(m, "hermitize");
  ComplexMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return r;
}

double hermiticity_residual(const ComplexMatrix& m) {
  require_square(m, "hermiticity_residual");
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j) - std::conj(m(j, i)));
  return std::sqrt(s);
}

namespace {

double offdiag_norm2(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += std::norm(a(i, j));
  return 2.0 * s;
}

}  // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
  require_square(m, "hermitian_eig");
  const std::size_t n = m.rows();
  const double norm = m.frobenius_norm();
  if (hermiticity_residual(m) > 1e-10 * std::max(1.0, norm))
    throw PreconditionError("hermitian_eig: input is not Hermitian");

  ComplexMatrix a = hermitize(m);
  ComplexMatrix v = ComplexMatrix::identity(n);
  EigenDecomposition out;
  const double target = 1e-15 * std::max(norm, 1e-300);

  constexpr std::size_t kMaxSweeps = 100;
  std::size_t sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (std::sqrt(offdiag_norm2(a)) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Negligible against both diagonal entries after the first sweeps: drop it.
        if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
            std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const cplx ph = apq / mag;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * mag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const cplx sphc = s * std::conj(ph);  // s e^{-i phi}
        const cplx cphc = c * std::conj(ph);  // c e^{-i phi}
        const cplx sph = s * ph;
        const cplx cph = c * ph;

        // A <- A G (columns p, q), V <- V G.
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sphc * akq;
          a(k, q) = s * akp + cphc * akq;
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sphc * vkq;
          v(k, q) = s * vkp + cphc * vkq;
        }
        // A <- G^dagger A (rows p, q).
        cplx* rp = a.data() + p * n;
        cplx* rq = a.data() + q * n;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = rp[k], aqk = rq[k];
          rp[k] = c * apk - sph * aqk;
          rq[k] = s * apk + cph * aqk;
        }
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }
  if (std::sqrt(offdiag_norm2(a)) > 1e-10 * std::max(norm, 1e-300))
    throw NumericError("hermitian_eig: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  out.sweeps = sweep;
  return out;
}

ComplexMatrix spectral_apply(const EigenDecomposition& eig, std::span<const cplx> f) {
  const std::size_t n = eig.values.size();
  if (f.size() != n) throw DimensionError("spectral_apply: function values size mismatch");
  const ComplexMatrix& v = eig.vectors;
  ComplexMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx vik = v(i, k) * f[k];
      if (vik == cplx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * std::conj(v(j, k));
    }
  return r;
}

ComplexMatrix matrix_exp(const ComplexMatrix& m) {
  require_square(m, "matrix_exp");
  // m = -i H with H Hermitian  <=>  i m Hermitian.
  const ComplexMatrix h = m * cplx{0.0, 1.0};
  if (hermiticity_residual(h) > 1e-10 * std::max(1.0, h.frobenius_norm()))
    throw PreconditionError("matrix_exp: exponent is not anti-Hermitian");
  return propagator(h, 1.0);
}

ComplexMatrix propagator(const ComplexMatrix& h, double t) { return SpectralPropagator(h).at(t); }

SpectralPropagator::SpectralPropagator(const ComplexMatrix& h) : eig_(hermitian_eig(h)) {}

ComplexMatrix SpectralPropagator::at(double t) const {
  ComplexVector f(eig_.values.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::exp(cplx{0.0, -eig_.values[k] * t});
  return spectral_apply(eig_, f);
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rank_cutoff) {
  require_square(m, "pseudo_inverse");
  const auto eig = hermitian_eig(m);
  const double lmax = eig.values.empty() ? 0.0 : std::max(0.0, eig.values.back());
  ComplexVector f(eig.values.size(), cplx{0.0, 0.0});
  if (lmax > 0.0)
    for (std::size_t k = 0; k < f.size(); ++k)
      if (eig.values[k] > rank_cutoff * lmax) f[k] = 1.0 / eig.values[k];
  return spectral_apply(eig, f);
}

ComplexMatrix null_projector(const ComplexMatrix& m, double rank_cutoff) {
  require_square(m, "null_projector");
  const auto eig = hermitian_eig(m);
  const double lmax = eig.values.empty() ? 0.0 : std::max(0.0, eig.values.back());
  ComplexVector f(eig.values.size(), cplx{0.0, 0.0});
  for (std::size_t k = 0; k < f.size(); ++k)
    if (eig.values[k] <= rank_cutoff * lmax) f[k] = 1.0;
  return spectral_apply(eig, f);
}

}  // namespace corrpic
