#pragma once

#include <cstdint>
#include <random>

#include "corrpic/ull.hpp"

namespace corrpic {

/// Seeded source for reproducible random operators and states.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  cplx complex_normal() { return {normal(), normal()}; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Complex Gaussian matrix.
ComplexMatrix random_ginibre(Rng& rng, std::size_t rows, std::size_t cols);
/// Hermitian matrix with Frobenius norm `norm`.
ComplexMatrix random_hermitian(Rng& rng, std::size_t n, double norm = 1.0);
/// Density matrix of the given rank (0 or >= n means full rank).
ComplexMatrix random_density(Rng& rng, std::size_t n, std::size_t rank);
/// Real orthogonal n x n matrix from Gram-Schmidt on a Gaussian matrix.
std::vector<std::vector<double>> random_orthogonal(Rng& rng, std::size_t n);
/// Gell-Mann basis with its traceless part rotated by a random orthogonal matrix.
OperatorBasis random_basis(Rng& rng, std::size_t d);

struct RandomInstance {
  BipartiteHamiltonian ham;
  JointState state;
};

/// Random H_S (unit norm), H_B, H_I (norm coupling * ||H_S||) and a random joint state.
RandomInstance random_instance(Rng& rng, BipartiteDims dims, double coupling, std::size_t rank);

}  // namespace corrpic
