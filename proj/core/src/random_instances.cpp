#include <cmath>

#include "corrpic/random.hpp"

namespace corrpic {

ComplexMatrix random_ginibre(Rng& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  return g;
}

ComplexMatrix random_hermitian(Rng& rng, std::size_t n, double norm) {
  auto h = hermitize(random_ginibre(rng, n, n));
  const double f = h.frobenius_norm();
  return f > 0.0 ? h * (norm / f) : h;
}

ComplexMatrix random_density(Rng& rng, std::size_t n, std::size_t rank) {
  if (rank == 0 || rank > n) rank = n;
  const auto g = random_ginibre(rng, n, rank);
  auto rho = g * g.adjoint();
  rho /= rho.trace();
  return hermitize(rho);
}

std::vector<std::vector<double>> random_orthogonal(Rng& rng, std::size_t n) {
  std::vector<std::vector<double>> q;
  while (q.size() < n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : q) {
        double dot = 0.0;
        for (std::size_t k = 0; k < n; ++k) dot += u[k] * v[k];
        for (std::size_t k = 0; k < n; ++k) v[k] -= dot * u[k];
      }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;
    for (double& x : v) x /= norm;
    q.push_back(std::move(v));
  }
  return q;
}

OperatorBasis random_basis(Rng& rng, std::size_t d) {
  const auto gm = build_basis(d);
  const std::size_t n = d * d - 1;
  const auto o = random_orthogonal(rng, n);
  std::vector<ComplexMatrix> elements{gm.elements[0]};
  for (std::size_t i = 0; i < n; ++i) {
    ComplexMatrix s(d, d);
    for (std::size_t k = 0; k < n; ++k) s.add_scaled(gm.elements[k + 1], o[i][k]);
    elements.push_back(std::move(s));
  }
  return make_basis(std::move(elements));
}

RandomInstance random_instance(Rng& rng, BipartiteDims dims, double coupling, std::size_t rank) {
  RandomInstance inst;
  inst.ham.h_s = random_hermitian(rng, dims.d_s, 1.0);
  inst.ham.h_b = random_hermitian(rng, dims.d_b, 1.0);
  inst.ham.h_i = random_hermitian(rng, dims.joint(), coupling);
  inst.state = {random_density(rng, dims.joint(), rank), dims};
  return inst;
}

}  // namespace corrpic
