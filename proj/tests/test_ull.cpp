#include <gtest/gtest.h>

#include "corrpic/models.hpp"
#include "corrpic/random.hpp"
#include "oracles.hpp"

using namespace corrpic;

namespace {

const cplx kI{0.0, 1.0};
const ComplexMatrix kSx(2, 2, {0.0, 1.0, 1.0, 0.0});
const ComplexMatrix kSy(2, 2, {0.0, -kI, kI, 0.0});
const ComplexMatrix kSz(2, 2, {1.0, 0.0, 0.0, -1.0});

ComplexMatrix system_part(const std::vector<ComplexMatrix>& s, const ComplexMatrix& a, const ComplexMatrix& rho) {
  // sum_ij a_ij (2 S_j rho S_i - {S_i S_j, rho}) with i, j >= 1
  ComplexMatrix out(rho.rows(), rho.cols());
  for (std::size_t i = 1; i < s.size(); ++i)
    for (std::size_t j = 1; j < s.size(); ++j)
      out.add_scaled(s[j] * rho * s[i] * 2.0 - anticommutator(s[i] * s[j], rho), a(i - 1, j - 1));
  return out;
}

}  // namespace

TEST(Basis, QubitIsScaledPauli) {
  const auto b = build_basis(2);
  ASSERT_EQ(b.elements.size(), 4u);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_LT(oracle::max_abs_diff(b.elements[0], ComplexMatrix::identity(2) * r), 1e-15);
  EXPECT_LT(oracle::max_abs_diff(b.elements[1], kSx * r), 1e-15);
  EXPECT_LT(oracle::max_abs_diff(b.elements[2], kSy * r), 1e-15);
  EXPECT_LT(oracle::max_abs_diff(b.elements[3], kSz * r), 1e-15);
}

TEST(Basis, OrthonormalAndHermitian) {
  for (std::size_t d = 2; d <= 5; ++d) {
    const auto b = build_basis(d);
    ASSERT_EQ(b.elements.size(), d * d);
    for (std::size_t i = 0; i < d * d; ++i) {
      EXPECT_LT(hermiticity_residual(b.elements[i]), 1e-12);
      for (std::size_t j = 0; j < d * d; ++j)
        EXPECT_NEAR(std::abs(hs_inner(b.elements[i], b.elements[j]) - (i == j ? 1.0 : 0.0)), 0.0, 1e-12);
    }
  }
}

TEST(Basis, CompletenessInDimensionThree) {
  Rng rng(1);
  const auto b = build_basis(3);
  const auto m = random_ginibre(rng, 3, 3);
  ComplexMatrix sum(3, 3);
  for (const auto& s : b.elements) sum.add_scaled(s, hs_inner(s, m));
  EXPECT_LT(oracle::max_abs_diff(sum, m), 1e-13);
}

TEST(Basis, RejectsDimensionOne) { EXPECT_THROW(build_basis(1), PreconditionError); }

TEST(Expand, JaynesCummingsInteraction) {
  JCParams p;
  p.lambda = 0.7;
  const auto ham = jc_hamiltonian(p);
  const auto comps = expand_bipartite(ham.h_i, build_basis(2), ham.dims());
  const auto a = lowering(p.fock_cut);
  const double f = p.lambda / std::sqrt(2.0);
  EXPECT_LT(comps[0].max_abs(), 1e-15);
  EXPECT_LT(oracle::max_abs_diff(comps[1], (a + a.adjoint()) * f), 1e-15);
  EXPECT_LT(oracle::max_abs_diff(comps[2], (a - a.adjoint()) * (kI * f)), 1e-15);
  EXPECT_LT(comps[3].max_abs(), 1e-15);
}

TEST(Expand, ZeroAndRandomReassembly) {
  Rng rng(2);
  const auto basis = build_basis(3);
  for (const auto& c : expand_bipartite(ComplexMatrix(6, 6), basis, {3, 2})) EXPECT_EQ(c.max_abs(), 0.0);
  for (int i = 0; i < 10; ++i) {
    const auto op = random_ginibre(rng, 12, 12);
    const auto comps = expand_bipartite(op, basis, {3, 4});
    EXPECT_LE((reassemble(comps, basis) - op).frobenius_norm(), 1e-10);
  }
  EXPECT_THROW(expand_bipartite(ComplexMatrix(5, 5), basis, {3, 2}), DimensionError);
}

TEST(Covariance, ZeroParentGivesZero) {
  Rng rng(3);
  const auto basis = build_basis(2);
  const auto h_i = random_hermitian(rng, 6);
  const auto exp = expand_interaction(h_i, ComplexMatrix(6, 6), basis, {2, 3});
  const auto cov = covariance_matrix(random_density(rng, 3, 0), exp);
  EXPECT_EQ(cov.c.max_abs(), 0.0);
}

TEST(Covariance, JaynesCummingsDiagonal) {
  JCParams p;
  for (double lt : {0.3, 1.1}) {
    const double tau = lt / p.lambda;
    const auto built = build_ull(jc_hamiltonian(p), jc_exact(p, tau).state, build_basis(2));
    const auto [a1, a2] = jc_alphas(p, tau);
    const cplx expected = p.lambda * cplx{a1 * a2, -2.0 * p.r1 * p.r2} / (2.0 * a1 * a1 - 2.0);
    EXPECT_LT(std::abs(built.cov.c(0, 1) - expected), 1e-12);
    EXPECT_LT(std::abs(built.cov.c(1, 2) - expected), 1e-12);
  }
}

TEST(Covariance, SplitIsHermitian) {
  Rng rng(4);
  const auto inst = random_instance(rng, {3, 2}, 2.0, 0);
  const auto built = build_ull(inst.ham, inst.state, build_basis(3));
  EXPECT_LT(hermiticity_residual(built.cov.a), 1e-12);
  EXPECT_LT(hermiticity_residual(built.cov.b), 1e-12);
  ComplexMatrix block(8, 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) block(i, j) = built.cov.c(i, j + 1);
  EXPECT_LT(oracle::max_abs_diff(block, built.cov.a + built.cov.b * kI), 1e-12);
}

TEST(MllCoefficients, CovarianceMatchesBathMoments) {
  Rng rng(5);
  const auto basis = build_basis(2);
  const auto inst = random_instance(rng, {2, 3}, 1.0, 0);
  const auto rho_s0 = random_density(rng, 2, 0), rho_b0 = random_density(rng, 3, 0);
  const double tau = 0.13;
  const auto coeffs = mll_coefficients(tau, inst.ham, rho_s0, rho_b0, basis);
  const auto b = expand_bipartite(inst.ham.h_i, basis, {2, 3});
  for (std::size_t i = 1; i < 4; ++i)
    for (std::size_t j = 1; j < 4; ++j) {
      const cplx moment = trace_product(rho_b0, b[i] * b[j]) - trace_product(rho_b0, b[i]) * trace_product(rho_b0, b[j]);
      EXPECT_LT(std::abs(coeffs.cov.c(i - 1, j) - tau * moment), 1e-12) << i << j;
    }
  EXPECT_EQ(coeffs.cov.b.max_abs(), 0.0);
  // Positive semidefinite A, so the MLL rates are non-negative.
  EXPECT_GE(hermitian_eig(coeffs.cov.a).values.front(), -1e-12);
}

TEST(MllCoefficients, ZeroInteractionGivesZero) {
  Rng rng(6);
  BipartiteHamiltonian ham{random_hermitian(rng, 2), random_hermitian(rng, 2), ComplexMatrix(4, 4)};
  const auto coeffs = mll_coefficients(0.5, ham, random_density(rng, 2, 0), random_density(rng, 2, 0), build_basis(2));
  EXPECT_EQ(coeffs.cov.a.max_abs(), 0.0);
  EXPECT_LT(coeffs.lamb_shift.max_abs(), 1e-15);
}

TEST(MllCoefficients, RatesNonNegativeOnRandomInstances) {
  Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    const BipartiteDims d{2 + i % 3, 2 + (i / 3) % 3};
    const auto inst = random_instance(rng, d, 3.0, 0);
    const auto c = mll_coefficients(rng.uniform(0.0, 2.0), inst.ham, random_density(rng, d.d_s, 1 + i % 2),
                                    random_density(rng, d.d_b, 0), build_basis(d.d_s));
    EXPECT_GE(hermitian_eig(c.cov.a).values.front(), -1e-12);
  }
}

TEST(LambShift, ZeroInteraction) {
  Rng rng(8);
  const auto basis = build_basis(2);
  const auto exp = expand_interaction(ComplexMatrix(4, 4), ComplexMatrix(4, 4), basis, {2, 2});
  const auto rho_b = random_density(rng, 2, 0);
  EXPECT_EQ(lamb_shift(exp, covariance_matrix(rho_b, exp), rho_b).max_abs(), 0.0);
}

TEST(LambShift, JaynesCummingsIdentityPart) {
  JCParams p;
  p.r1 = 0.6;
  p.r2 = 0.8;
  for (double lt : {0.4, 1.3, 2.2}) {
    const auto pipe = jc_pipeline_coefficients(p, lt / p.lambda);
    const auto closed = jc_ull_coefficients(p, lt / p.lambda);
    EXPECT_NEAR(pipe.identity_shift, closed.identity_shift, 1e-10);
  }
}

TEST(LambShift, MllRegimeFirstOrderForm) {
  // <H_I>_B0 - i tau <[H_I, H~_B]>_B0 - 2 tau sum <S_j>_S0 Im<B_i B_j>_B0 S_i
  Rng rng(9);
  const BipartiteDims d{2, 3};
  const auto basis = build_basis(2);
  const auto inst = random_instance(rng, d, 1.0, 0);
  const auto rho_s0 = random_density(rng, 2, 0), rho_b0 = random_density(rng, 3, 0);
  const double tau = 0.21;
  const auto coeffs = mll_coefficients(tau, inst.ham, rho_s0, rho_b0, basis);

  const auto lift_b = [&](const ComplexMatrix& y) { return kron(ComplexMatrix::identity(2), y); };
  const auto mean_b = [&](const ComplexMatrix& op) { return oracle::trace_out_b(op * lift_b(rho_b0), d); };
  const auto h_b_tilde = inst.ham.h_b + oracle::trace_out_s(kron(rho_s0, ComplexMatrix::identity(3)) * inst.ham.h_i, d);
  auto expected = mean_b(inst.ham.h_i) + mean_b(commutator(inst.ham.h_i, lift_b(h_b_tilde))) * (-kI * tau);
  const auto b = expand_bipartite(inst.ham.h_i, basis, d);
  for (std::size_t i = 1; i < 4; ++i)
    for (std::size_t j = 1; j < 4; ++j) {
      const double s_j = trace_product(rho_s0, basis.elements[j]).real();
      const double im = trace_product(rho_b0, b[i] * b[j]).imag();
      expected.add_scaled(basis.elements[i], -2.0 * tau * s_j * im);
    }
  EXPECT_LT(oracle::max_abs_diff(coeffs.lamb_shift, hermitize(expected)), 1e-12);
}

TEST(Generator, JaynesCummingsRates) {
  JCParams p;
  p.r1 = 0.6;
  p.r2 = 0.8;
  for (double lt : {0.4, 1.3, 2.2}) {
    const auto pipe = jc_pipeline_coefficients(p, lt / p.lambda);
    const auto closed = jc_ull_coefficients(p, lt / p.lambda);
    EXPECT_NEAR(pipe.gamma1, closed.gamma1, 1e-10);
    EXPECT_NEAR(pipe.gamma2, closed.gamma2, 1e-10);
  }
}

TEST(Generator, ZeroCovarianceIsUnitary) {
  Rng rng(10);
  const auto h_s = random_hermitian(rng, 2);
  BipartiteHamiltonian ham{h_s, random_hermitian(rng, 2), ComplexMatrix(4, 4)};
  const auto state = JointState{kron(random_density(rng, 2, 0), random_density(rng, 2, 0)), {2, 2}};
  const auto built = build_ull(ham, state, build_basis(2));
  for (double r : built.gen.rates) EXPECT_EQ(r, 0.0);
  const auto rho = built.dec.rho_s;
  EXPECT_LT(oracle::max_abs_diff(ull_rhs(rho, built.gen), commutator(h_s, rho) * -kI), 1e-14);
}

TEST(Generator, DiagonalFormMatchesCovarianceForm) {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const BipartiteDims d{2 + i % 3, 2 + (i / 3) % 3};
    const auto inst = random_instance(rng, d, 3.0, i % 3);
    const auto basis = build_basis(d.d_s);
    const auto built = build_ull(inst.ham, inst.state, basis);
    const auto rho = random_density(rng, d.d_s, 0);
    const auto lhs = dissipator(rho, built.gen.rates, built.gen.jumps);
    EXPECT_LT((lhs - system_part(basis.elements, built.cov.a, rho)).frobenius_norm(), 1e-10);
  }
}

TEST(UllRhs, ExactOnRandomStronglyCoupledInstances) {
  Rng rng(12);
  for (int i = 0; i < 120; ++i) {
    const BipartiteDims d{2 + i % 3, 2 + (i / 3) % 3};
    const auto inst = random_instance(rng, d, 5.0, std::array<std::size_t, 3>{1, 2, 0}[i % 3]);
    const auto built = build_ull(inst.ham, inst.state, build_basis(d.d_s));
    const auto rhs = ull_rhs(built.dec.rho_s, built.gen);
    EXPECT_LE((rhs - exact_reduced_rhs(inst.ham.joint(), inst.state)).frobenius_norm(), 1e-8);
    EXPECT_LE(hermiticity_residual(rhs), 1e-12);
    EXPECT_LE(std::abs(rhs.trace()), 1e-12);
  }
}

TEST(UllRhs, JaynesCummingsMatchesExactDerivative) {
  JCParams p;
  p.r1 = 0.6;
  p.r2 = 0.8;
  const auto ham = jc_hamiltonian(p);
  for (double tau : {0.2, 0.7, 1.9}) {
    const auto state = jc_exact(p, tau).state;
    const auto built = build_ull(ham, state, build_basis(2));
    const double h = 1e-5;
    const auto fwd = jc_exact(p, tau + h).dec.rho_s, bwd = jc_exact(p, tau - h).dec.rho_s;
    const auto numeric = (fwd - bwd) * (0.5 / h);
    EXPECT_LT(oracle::max_abs_diff(ull_rhs(built.dec.rho_s, built.gen), numeric), 1e-9);
  }
}

TEST(UllRhs, LinearForFixedGenerator) {
  Rng rng(13);
  const auto inst = random_instance(rng, {3, 2}, 2.0, 0);
  const auto gen = build_ull(inst.ham, inst.state, build_basis(3)).gen;
  std::vector<ComplexMatrix> parts;
  std::vector<double> weights{0.2, 0.5, 0.3};
  ComplexMatrix mix(3, 3), combined(3, 3);
  for (double w : weights) {
    parts.push_back(random_density(rng, 3, 0));
    mix.add_scaled(parts.back(), w);
    combined.add_scaled(ull_rhs(parts.back(), gen), w);
  }
  EXPECT_LT((ull_rhs(mix, gen) - combined).frobenius_norm(), 1e-12);
}

TEST(UllRhs, IndependentOfBasisChoice) {
  Rng rng(14);
  for (int i = 0; i < 10; ++i) {
    const BipartiteDims d{2 + i % 3, 3};
    const auto inst = random_instance(rng, d, 2.0, i % 3);
    const auto gell_mann = build_ull(inst.ham, inst.state, build_basis(d.d_s));
    const auto rotated = build_ull(inst.ham, inst.state, random_basis(rng, d.d_s));
    const auto rho = gell_mann.dec.rho_s;
    EXPECT_LT((ull_rhs(rho, gell_mann.gen) - ull_rhs(rho, rotated.gen)).frobenius_norm(), 1e-10);
  }
}

TEST(UllRhs, ClosedSystemLimit) {
  Rng rng(15);
  const auto h = random_hermitian(rng, 3);
  const auto rho = random_density(rng, 3, 0);
  const ULLGenerator gen{h, {}, {}};
  EXPECT_LT(oracle::max_abs_diff(ull_rhs(rho, gen), commutator(h, rho) * -kI), 1e-15);
}
