#pragma once

#include "corrpic/linalg.hpp"

namespace corrpic {

/// Joint density matrix on a bipartite space.
struct JointState {
  ComplexMatrix rho_sb;
  BipartiteDims dims;
};

/// Throws PreconditionError unless Hermitian, unit-trace and PSD within tol.
void validate_density(const ComplexMatrix& rho, double tol = 1e-10);

/// rho_SB = rho_S (x) rho_B + chi
struct CorrelationDecomposition {
  ComplexMatrix rho_s;
  ComplexMatrix rho_b;
  ComplexMatrix chi;
  BipartiteDims dims;

  ComplexMatrix product() const { return kron(rho_s, rho_b); }
};

/// Generally non-Hermitian H_chi with chi = -i [[H_chi, rho_S (x) rho_B]].
struct CorrelationParent {
  ComplexMatrix h_chi;
  /// ||reconstructed chi - chi||_F / ||chi||_F (absolute when ||chi||_F <= 1e-12).
  double reconstruction_residual = 0.0;
  /// ||P0 chi P0||_F
  double null_residual = 0.0;
};

CorrelationDecomposition decompose(const JointState& state);

/// [[a, b]] = a b - b^dagger a^dagger
ComplexMatrix gen_commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Orthogonal projector onto the null space of rho_S (x) rho_B.
ComplexMatrix product_null_projector(const CorrelationDecomposition& dec,
                                     double rank_cutoff = kDefaultRankCutoff);

/// -i H_chi = (I + P0) chi (rho_S^+ (x) rho_B^+) / 2, gauge terms set to zero.
CorrelationParent solve_parent(const CorrelationDecomposition& dec,
                               double rank_cutoff = kDefaultRankCutoff);

/// -i [[h_chi, rho_S (x) rho_B]]
ComplexMatrix reconstruct_chi(const ComplexMatrix& h_chi, const CorrelationDecomposition& dec);

/// ||P0 chi P0||_F
double check_null_compatibility(const CorrelationDecomposition& dec,
                                double rank_cutoff = kDefaultRankCutoff);

/// Largest Frobenius norm of Tr_S chi and Tr_B chi.
double marginal_residual(const CorrelationDecomposition& dec);

}  // namespace corrpic
