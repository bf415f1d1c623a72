#include "corrpic/ull.hpp"

#include <cmath>
#include <string>

namespace corrpic {

namespace {

constexpr cplx kI{0.0, 1.0};

ComplexMatrix expectation_over_b(const ComplexMatrix& op, const ComplexMatrix& rho_b, BipartiteDims dims) {
  // Tr_B[op (I (x) rho_B)]
  return partial_trace(op * kron(ComplexMatrix::identity(dims.d_s), rho_b), dims, TraceOver::B);
}

ComplexMatrix expectation_over_s(const ComplexMatrix& op, const ComplexMatrix& rho_s, BipartiteDims dims) {
  return partial_trace(kron(rho_s, ComplexMatrix::identity(dims.d_b)) * op, dims, TraceOver::S);
}

}  // namespace

OperatorBasis build_basis(std::size_t d) {
  if (d < 2) throw PreconditionError("build_basis: dimension must be at least 2");
  OperatorBasis basis;
  basis.d = d;
  basis.elements.reserve(d * d);
  basis.elements.push_back(ComplexMatrix::identity(d) / std::sqrt(static_cast<double>(d)));
  const double r2 = 1.0 / std::sqrt(2.0);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      ComplexMatrix m(d, d);
      m(j, k) = r2;
      m(k, j) = r2;
      basis.elements.push_back(std::move(m));
    }
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      ComplexMatrix m(d, d);
      m(j, k) = cplx{0.0, -r2};
      m(k, j) = cplx{0.0, r2};
      basis.elements.push_back(std::move(m));
    }
  for (std::size_t l = 1; l < d; ++l) {
    ComplexMatrix m(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (std::size_t j = 0; j < l; ++j) m(j, j) = norm;
    m(l, l) = -static_cast<double>(l) * norm;
    basis.elements.push_back(std::move(m));
  }
  return basis;
}

OperatorBasis make_basis(std::vector<ComplexMatrix> elements) {
  if (elements.empty()) throw PreconditionError("make_basis: no elements");
  const std::size_t d = elements.front().rows();
  if (d < 2 || elements.size() != d * d) throw PreconditionError("make_basis: need d*d elements, d >= 2");
  const auto s0 = ComplexMatrix::identity(d) / std::sqrt(static_cast<double>(d));
  if ((elements.front() - s0).frobenius_norm() > 1e-12)
    throw PreconditionError("make_basis: first element must be I/sqrt(d)");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].rows() != d || elements[i].cols() != d)
      throw DimensionError("make_basis: element shape mismatch");
    if (hermiticity_residual(elements[i]) > 1e-12)
      throw PreconditionError("make_basis: element " + std::to_string(i) + " is not Hermitian");
    for (std::size_t j = 0; j <= i; ++j) {
      const cplx g = hs_inner(elements[i], elements[j]);
      if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-12)
        throw PreconditionError("make_basis: elements are not orthonormal");
    }
  }
  return OperatorBasis{d, std::move(elements)};
}

std::vector<ComplexMatrix> expand_bipartite(const ComplexMatrix& op, const OperatorBasis& basis,
                                            BipartiteDims dims) {
  require_square(op, "expand_bipartite");
  if (op.rows() != dims.joint() || basis.d != dims.d_s)
    throw DimensionError("expand_bipartite: dims do not match operator or basis");
  const std::size_t ds = dims.d_s, db = dims.d_b;
  std::vector<ComplexMatrix> comps;
  comps.reserve(basis.elements.size());
  for (const auto& s : basis.elements) {
    ComplexMatrix c(db, db);
    for (std::size_t p = 0; p < ds; ++p)
      for (std::size_t q = 0; q < ds; ++q) {
        const cplx spq = s(p, q);
        if (spq == cplx{0.0, 0.0}) continue;
        // (S (x) I) op: row block p, column block of op's row q.
        for (std::size_t a = 0; a < db; ++a)
          for (std::size_t b = 0; b < db; ++b) c(a, b) += spq * op(q * db + a, p * db + b);
      }
    comps.push_back(std::move(c));
  }
  return comps;
}

ComplexMatrix reassemble(const std::vector<ComplexMatrix>& comps, const OperatorBasis& basis) {
  if (comps.size() != basis.elements.size()) throw DimensionError("reassemble: component count mismatch");
  const std::size_t db = comps.empty() ? 0 : comps.front().rows();
  ComplexMatrix out(basis.d * db, basis.d * db);
  for (std::size_t k = 0; k < comps.size(); ++k) out += kron(basis.elements[k], comps[k]);
  return out;
}

InteractionExpansion expand_interaction(const ComplexMatrix& h_i, const ComplexMatrix& h_chi,
                                        const OperatorBasis& basis, BipartiteDims dims) {
  return InteractionExpansion{basis, dims, expand_bipartite(h_i, basis, dims),
                              expand_bipartite(h_chi, basis, dims)};
}

CovarianceData covariance_matrix(const ComplexMatrix& rho_b, const InteractionExpansion& exp) {
  const std::size_t n = exp.basis.elements.size();
  if (exp.bath_ops.size() != n || exp.bath_parent_ops.size() != n)
    throw DimensionError("covariance_matrix: expansion size mismatch");
  CovarianceData cov;
  cov.c = ComplexMatrix(n - 1, n);
  for (std::size_t i = 1; i < n; ++i) {
    const auto rb = rho_b * exp.bath_ops[i];
    for (std::size_t j = 0; j < n; ++j) cov.c(i - 1, j) = trace_product(rb, exp.bath_parent_ops[j]);
  }
  cov.c0.resize(n - 1);
  ComplexMatrix block(n - 1, n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cov.c0[i] = cov.c(i, 0);
    for (std::size_t j = 0; j + 1 < n; ++j) block(i, j) = cov.c(i, j + 1);
  }
  const auto adj = block.adjoint();
  cov.a = (block + adj) * 0.5;
  cov.b = (block - adj) * cplx{0.0, -0.5};
  return cov;
}

ComplexMatrix lamb_shift(const InteractionExpansion& exp, const CovarianceData& cov,
                         const ComplexMatrix& rho_b) {
  const auto& s = exp.basis.elements;
  const std::size_t n = s.size();
  ComplexMatrix h(exp.basis.d, exp.basis.d);
  for (std::size_t i = 0; i < n; ++i) h.add_scaled(s[i], trace_product(rho_b, exp.bath_ops[i]));
  for (std::size_t i = 1; i < n; ++i) h.add_scaled(s[i] * s[0], 2.0 * cov.c0[i - 1].imag());
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) {
      const cplx bij = cov.b(i - 1, j - 1);
      if (bij == cplx{0.0, 0.0}) continue;
      h.add_scaled(s[i] * s[j], bij);
    }
  return hermitize(h);
}

namespace {

ULLGenerator generator_from_coefficients(const ComplexMatrix& h_eff, const ComplexMatrix& a,
                                         const std::vector<ComplexMatrix>& ops) {
  ULLGenerator gen;
  gen.h_eff = hermitize(h_eff);
  const auto eig = hermitian_eig(hermitize(a));
  gen.rates = eig.values;
  const std::size_t d = ops.empty() ? h_eff.rows() : ops.front().rows();
  for (std::size_t m = 0; m < eig.values.size(); ++m) {
    ComplexMatrix l(d, d);
    for (std::size_t j = 0; j < ops.size(); ++j) l.add_scaled(ops[j], std::conj(eig.vectors(j, m)));
    gen.jumps.push_back(std::move(l));
  }
  return gen;
}

}  // namespace

ULLGenerator build_generator(const ComplexMatrix& h_s, const InteractionExpansion& exp,
                             const CovarianceData& cov, const ComplexMatrix& rho_b) {
  const std::vector<ComplexMatrix> ops(exp.basis.elements.begin() + 1, exp.basis.elements.end());
  return generator_from_coefficients(h_s + lamb_shift(exp, cov, rho_b), cov.a, ops);
}

ComplexMatrix dissipator(const ComplexMatrix& rho, const std::vector<double>& rates,
                         const std::vector<ComplexMatrix>& jumps) {
  ComplexMatrix out(rho.rows(), rho.cols());
  for (std::size_t m = 0; m < jumps.size(); ++m) {
    if (rates[m] == 0.0) continue;
    const auto& l = jumps[m];
    const auto ld = l.adjoint();
    const auto ldl = ld * l;
    out.add_scaled(l * rho * ld * 2.0 - ldl * rho - rho * ldl, rates[m]);
  }
  return out;
}

ComplexMatrix ull_rhs(const ComplexMatrix& rho_s, const ULLGenerator& gen) {
  auto out = commutator(gen.h_eff, rho_s) * (-kI);
  out += dissipator(rho_s, gen.rates, gen.jumps);
  return hermitize(out);
}

ComplexMatrix BipartiteHamiltonian::joint() const {
  return kron(h_s, ComplexMatrix::identity(h_b.rows())) + kron(ComplexMatrix::identity(h_s.rows()), h_b) + h_i;
}

ULLConstruction build_ull(const BipartiteHamiltonian& ham, const JointState& state,
                          const OperatorBasis& basis, double rank_cutoff) {
  if (!(ham.dims() == state.dims)) throw DimensionError("build_ull: Hamiltonian and state dims differ");
  ULLConstruction out;
  out.dec = decompose(state);
  out.parent = solve_parent(out.dec, rank_cutoff);
  out.expansion = expand_interaction(ham.h_i, out.parent.h_chi, basis, state.dims);
  out.cov = covariance_matrix(out.dec.rho_b, out.expansion);
  out.gen = build_generator(ham.h_s, out.expansion, out.cov, out.dec.rho_b);
  return out;
}

ComplexMatrix exact_reduced_rhs(const ComplexMatrix& h_sb, const JointState& state) {
  return partial_trace(commutator(h_sb, state.rho_sb) * (-kI), state.dims, TraceOver::B);
}

MllSpec make_mll_spec(const BipartiteHamiltonian& ham, const ComplexMatrix& rho_s0,
                      const ComplexMatrix& rho_b0, const OperatorBasis& basis) {
  const auto dims = ham.dims();
  const auto comps = expand_bipartite(ham.h_i, basis, dims);
  const std::size_t n = basis.elements.size();

  MllSpec spec;
  spec.h_s = ham.h_s;
  spec.ops.assign(basis.elements.begin() + 1, basis.elements.end());
  std::vector<cplx> mean(n);
  for (std::size_t i = 0; i < n; ++i) mean[i] = trace_product(rho_b0, comps[i]);
  ComplexMatrix second(n - 1, n - 1);  // <B_i B_j>
  for (std::size_t i = 1; i < n; ++i) {
    const auto rb = rho_b0 * comps[i];
    for (std::size_t j = 1; j < n; ++j) second(i - 1, j - 1) = trace_product(rb, comps[j]);
  }
  spec.cov = ComplexMatrix(n - 1, n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j + 1 < n; ++j) spec.cov(i, j) = second(i, j) - mean[i + 1] * mean[j + 1];
  spec.cov = hermitize(spec.cov);

  spec.lamb0 = hermitize(expectation_over_b(ham.h_i, rho_b0, dims));

  const auto h_b_tilde = ham.h_b + expectation_over_s(ham.h_i, rho_s0, dims);
  const auto lifted = kron(ComplexMatrix::identity(dims.d_s), h_b_tilde);
  ComplexMatrix lamb1 = expectation_over_b(commutator(ham.h_i, lifted), rho_b0, dims) * (-kI);
  for (std::size_t i = 1; i < n; ++i) {
    double coeff = 0.0;
    for (std::size_t j = 1; j < n; ++j)
      coeff += trace_product(rho_s0, basis.elements[j]).real() * second(i - 1, j - 1).imag();
    lamb1.add_scaled(basis.elements[i], -2.0 * coeff);
  }
  spec.lamb1 = hermitize(lamb1);
  return spec;
}

ULLGenerator MllSpec::generator(double t) const {
  return generator_from_coefficients(h_s + lamb_shift(t), cov * t, ops);
}

ComplexMatrix mll_rhs(double t, const ComplexMatrix& rho, const MllSpec& spec) {
  auto out = commutator(spec.h_s + spec.lamb_shift(t), rho) * (-kI);
  const std::size_t n = spec.ops.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const cplx c = spec.cov(i, j) * t;
      if (c == cplx{0.0, 0.0}) continue;
      const auto& si = spec.ops[i];
      const auto& sj = spec.ops[j];
      const auto sisj = si * sj;
      out.add_scaled(sj * rho * si * 2.0 - sisj * rho - rho * sisj, c);
    }
  return hermitize(out);
}

MllCoefficients mll_coefficients(double tau, const BipartiteHamiltonian& ham,
                                 const ComplexMatrix& rho_s0, const ComplexMatrix& rho_b0,
                                 const OperatorBasis& basis) {
  const auto dims = ham.dims();
  const auto spec = make_mll_spec(ham, rho_s0, rho_b0, basis);
  // First-order parent: H_chi = tau * H_I with both mean fields removed.
  const auto h_tilde = ham.h_i - kron(spec.lamb0, ComplexMatrix::identity(dims.d_b)) -
                       kron(ComplexMatrix::identity(dims.d_s), expectation_over_s(ham.h_i, rho_s0, dims));
  const auto exp = expand_interaction(ham.h_i, h_tilde * tau, basis, dims);
  MllCoefficients out;
  out.cov = covariance_matrix(rho_b0, exp);
  out.cov.a = spec.cov * tau;
  out.cov.b = ComplexMatrix(spec.cov.rows(), spec.cov.cols());
  out.lamb_shift = spec.lamb_shift(tau);
  return out;
}

}  // namespace corrpic
