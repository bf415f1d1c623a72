#pragma once

#include <vector>

#include "corrpic/correlation.hpp"
#include "corrpic/linalg.hpp"

namespace corrpic {

/// Hilbert-Schmidt orthonormal Hermitian basis with elements[0] = I/sqrt(d).
struct OperatorBasis {
  std::size_t d = 0;
  std::vector<ComplexMatrix> elements;
};

/// Normalized generalized Gell-Mann basis: I/sqrt(d), symmetric, antisymmetric, diagonal.
OperatorBasis build_basis(std::size_t d);
/// Checks orthonormality, Hermiticity and elements[0] = I/sqrt(d); throws PreconditionError.
OperatorBasis make_basis(std::vector<ComplexMatrix> elements);

/// comp_k = Tr_S[(S_k (x) I) op], so that op = sum_k S_k (x) comp_k.
std::vector<ComplexMatrix> expand_bipartite(const ComplexMatrix& op, const OperatorBasis& basis,
                                            BipartiteDims dims);
/// sum_k S_k (x) comps[k]
ComplexMatrix reassemble(const std::vector<ComplexMatrix>& comps, const OperatorBasis& basis);

/// H_I = sum_i S_i (x) B_i,  H_chi = sum_j S_j (x) B_j^chi.
struct InteractionExpansion {
  OperatorBasis basis;
  BipartiteDims dims;
  std::vector<ComplexMatrix> bath_ops;
  std::vector<ComplexMatrix> bath_parent_ops;
};

InteractionExpansion expand_interaction(const ComplexMatrix& h_i, const ComplexMatrix& h_chi,
                                        const OperatorBasis& basis, BipartiteDims dims);

/**
 * c_ij = Tr[rho_B B_i B_j^chi], i >= 1.
 *
 * c0 holds the column j = 0 (index i-1). A and B are the Hermitian
 * matrices with C = A + iB on the block i, j >= 1 (indices shifted by one).
 */
struct CovarianceData {
  ComplexMatrix c;
  ComplexVector c0;
  ComplexMatrix a;
  ComplexMatrix b;
};

CovarianceData covariance_matrix(const ComplexMatrix& rho_b, const InteractionExpansion& exp);

/// <H_I>_B + 2 sum_i Im(c_i0) S_i S_0 + sum_ij b_ij S_i S_j, Hermitized.
ComplexMatrix lamb_shift(const InteractionExpansion& exp, const CovarianceData& cov,
                         const ComplexMatrix& rho_b);

/// d rho/dt = -i[h_eff, rho] + sum_m rates[m] (2 L rho L^dag - {L^dag L, rho})
struct ULLGenerator {
  ComplexMatrix h_eff;
  std::vector<double> rates;
  std::vector<ComplexMatrix> jumps;
};

ULLGenerator build_generator(const ComplexMatrix& h_s, const InteractionExpansion& exp,
                             const CovarianceData& cov, const ComplexMatrix& rho_b);

ComplexMatrix ull_rhs(const ComplexMatrix& rho_s, const ULLGenerator& gen);

/// sum_m rates[m] (2 L rho L^dag - {L^dag L, rho})
ComplexMatrix dissipator(const ComplexMatrix& rho, const std::vector<double>& rates,
                         const std::vector<ComplexMatrix>& jumps);

/// H_SB = H_S (x) I + I (x) H_B + H_I
struct BipartiteHamiltonian {
  ComplexMatrix h_s;
  ComplexMatrix h_b;
  ComplexMatrix h_i;

  BipartiteDims dims() const { return {h_s.rows(), h_b.rows()}; }
  ComplexMatrix joint() const;
};

/// Everything that goes into one exact generator, kept for diagnostics.
struct ULLConstruction {
  CorrelationDecomposition dec;
  CorrelationParent parent;
  InteractionExpansion expansion;
  CovarianceData cov;
  ULLGenerator gen;
};

/// Exact generator at the instant described by rho_SB.
ULLConstruction build_ull(const BipartiteHamiltonian& ham, const JointState& state,
                          const OperatorBasis& basis, double rank_cutoff = kDefaultRankCutoff);

/// Tr_B(-i[H_SB, rho_SB])
ComplexMatrix exact_reduced_rhs(const ComplexMatrix& h_sb, const JointState& state);

/**
 * Markovian generator about a product state.
 *
 * rhs(t, rho) = -i[h_s + lamb0 + t lamb1, rho]
 *             + t sum_ij cov_ij (2 S_j rho S_i - {S_i S_j, rho}),
 * i.e. rates grow linearly with the time elapsed since the product state.
 */
struct MllSpec {
  ComplexMatrix h_s;
  std::vector<ComplexMatrix> ops;
  ComplexMatrix cov;
  ComplexMatrix lamb0;
  ComplexMatrix lamb1;

  ComplexMatrix lamb_shift(double t) const { return lamb0 + lamb1 * t; }
  ULLGenerator generator(double t) const;
};

MllSpec make_mll_spec(const BipartiteHamiltonian& ham, const ComplexMatrix& rho_s0,
                      const ComplexMatrix& rho_b0, const OperatorBasis& basis);

ComplexMatrix mll_rhs(double t, const ComplexMatrix& rho, const MllSpec& spec);

struct MllCoefficients {
  CovarianceData cov;
  ComplexMatrix lamb_shift;
};

/// a_ij = tau Cov_B0(B_i, B_j), b_ij = 0, and the first-order Lamb shift.
MllCoefficients mll_coefficients(double tau, const BipartiteHamiltonian& ham,
                                 const ComplexMatrix& rho_s0, const ComplexMatrix& rho_b0,
                                 const OperatorBasis& basis);

}  // namespace corrpic
