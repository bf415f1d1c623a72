#include "corrpic/correlation.hpp"

#include <algorithm>
#include <cmath>

namespace corrpic {

void validate_density(const ComplexMatrix& rho, double tol) {
  require_square(rho, "validate_density");
  if (!rho.all_finite()) throw PreconditionError("density matrix has non-finite entries");
  if (hermiticity_residual(rho) > tol) throw PreconditionError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol) throw PreconditionError("density matrix trace differs from 1");
  const auto eig = hermitian_eig(rho);
  if (!eig.values.empty() && eig.values.front() < -tol)
    throw PreconditionError("density matrix has a negative eigenvalue");
}

CorrelationDecomposition decompose(const JointState& state) {
  require_square(state.rho_sb, "decompose");
  if (state.rho_sb.rows() != state.dims.joint()) throw DimensionError("decompose: side != d_s*d_b");
  if (std::abs(state.rho_sb.trace() - 1.0) > 1e-8)
    throw PreconditionError("decompose: joint state trace differs from 1");
  CorrelationDecomposition dec;
  dec.dims = state.dims;
  dec.rho_s = partial_trace(state.rho_sb, state.dims, TraceOver::B);
  dec.rho_b = partial_trace(state.rho_sb, state.dims, TraceOver::S);
  dec.chi = state.rho_sb - kron(dec.rho_s, dec.rho_b);
  return dec;
}

ComplexMatrix gen_commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "gen_commutator");
  return a * b - b.adjoint() * a.adjoint();
}

ComplexMatrix product_null_projector(const CorrelationDecomposition& dec, double rank_cutoff) {
  const auto range_s = ComplexMatrix::identity(dec.dims.d_s) - null_projector(dec.rho_s, rank_cutoff);
  const auto range_b = ComplexMatrix::identity(dec.dims.d_b) - null_projector(dec.rho_b, rank_cutoff);
  return ComplexMatrix::identity(dec.dims.joint()) - kron(range_s, range_b);
}

ComplexMatrix reconstruct_chi(const ComplexMatrix& h_chi, const CorrelationDecomposition& dec) {
  return gen_commutator(h_chi, dec.product()) * cplx{0.0, -1.0};
}

CorrelationParent solve_parent(const CorrelationDecomposition& dec, double rank_cutoff) {
  const std::size_t n = dec.dims.joint();
  const auto p0 = product_null_projector(dec, rank_cutoff);
  const auto inv = kron(pseudo_inverse(dec.rho_s, rank_cutoff), pseudo_inverse(dec.rho_b, rank_cutoff));

  CorrelationParent out;
  // H = i (I + P0) chi R^+ / 2
  out.h_chi = (ComplexMatrix::identity(n) + p0) * dec.chi * inv * cplx{0.0, 0.5};
  out.null_residual = (p0 * dec.chi * p0).frobenius_norm();
  const double chi_norm = dec.chi.frobenius_norm();
  const double diff = (reconstruct_chi(out.h_chi, dec) - dec.chi).frobenius_norm();
  // Below 1e-12 the relative error is meaningless; report the absolute one.
  out.reconstruction_residual = chi_norm > 1e-12 ? diff / chi_norm : diff;
  return out;
}

double check_null_compatibility(const CorrelationDecomposition& dec, double rank_cutoff) {
  const auto p0 = product_null_projector(dec, rank_cutoff);
  return (p0 * dec.chi * p0).frobenius_norm();
}

double marginal_residual(const CorrelationDecomposition& dec) {
  return std::max(partial_trace(dec.chi, dec.dims, TraceOver::S).frobenius_norm(),
                  partial_trace(dec.chi, dec.dims, TraceOver::B).frobenius_norm());
}

}  // namespace corrpic
