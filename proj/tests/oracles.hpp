#pragma once

// Brute-force reference implementations used only as test oracles.

#include <cmath>

#include "corrpic/linalg.hpp"

namespace oracle {

using corrpic::BipartiteDims;
using corrpic::ComplexMatrix;
using corrpic::cplx;

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline ComplexMatrix trace_out_b(const ComplexMatrix& m, BipartiteDims d) {
  ComplexMatrix out(d.d_s, d.d_s);
  for (std::size_t i = 0; i < d.d_s; ++i)
    for (std::size_t j = 0; j < d.d_s; ++j)
      for (std::size_t k = 0; k < d.d_b; ++k) out(i, j) += m(i * d.d_b + k, j * d.d_b + k);
  return out;
}

inline ComplexMatrix trace_out_s(const ComplexMatrix& m, BipartiteDims d) {
  ComplexMatrix out(d.d_b, d.d_b);
  for (std::size_t k = 0; k < d.d_b; ++k)
    for (std::size_t l = 0; l < d.d_b; ++l)
      for (std::size_t i = 0; i < d.d_s; ++i) out(k, l) += m(i * d.d_b + k, i * d.d_b + l);
  return out;
}

inline ComplexMatrix product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (std::size_t k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
  return out;
}

/// exp(m) by scaling, a 30-term Taylor series, and squaring.
inline ComplexMatrix taylor_exp(const ComplexMatrix& m) {
  int squarings = 0;
  double norm = m.frobenius_norm();
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  const auto a = m * std::pow(0.5, squarings);
  auto term = ComplexMatrix::identity(m.rows());
  auto sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = product(term, a) * (1.0 / k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = product(sum, sum);
  return sum;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

}  // namespace oracle
