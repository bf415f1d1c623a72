#include <gtest/gtest.h>

#include "corrpic/models.hpp"
#include "corrpic/random.hpp"
#include "oracles.hpp"

using namespace corrpic;

namespace {

JointState random_joint(Rng& rng, BipartiteDims d, std::size_t rank) {
  return {random_density(rng, d.joint(), rank), d};
}

ComplexMatrix bell() {
  ComplexVector phi{1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
  return ComplexMatrix::outer(phi, phi);
}

}  // namespace

TEST(Decompose, ProductStateHasNoCorrelation) {
  Rng rng(1);
  const auto rs = random_density(rng, 2, 0), rb = random_density(rng, 3, 0);
  const auto dec = decompose({kron(rs, rb), {2, 3}});
  EXPECT_LT(dec.chi.max_abs(), 1e-14);
  EXPECT_LT(oracle::max_abs_diff(dec.rho_s, rs), 1e-15);
  EXPECT_LT(oracle::max_abs_diff(dec.rho_b, rb), 1e-15);
}

TEST(Decompose, BellState) {
  const auto dec = decompose({bell(), {2, 2}});
  EXPECT_LT(oracle::max_abs_diff(dec.chi, bell() - ComplexMatrix::identity(4) * 0.25), 1e-15);
}

TEST(Decompose, JaynesCummingsClosedForm) {
  JCParams p;
  const double tau = 0.3 / p.lambda;
  const auto dec = jc_exact(p, tau).dec;
  EXPECT_LT(oracle::max_abs_diff(dec.chi, jc_chi_closed_form(p, tau)), 1e-12);
}

TEST(Decompose, RejectsNonUnitTrace) {
  EXPECT_THROW(decompose({ComplexMatrix::identity(4) * 0.3, {2, 2}}), PreconditionError);
}

TEST(Decompose, MarginalsOfChiVanish) {
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const BipartiteDims d{2 + i % 3, 2 + (i / 3) % 3};
    const auto dec = decompose(random_joint(rng, d, i % 4));
    EXPECT_LE(marginal_residual(dec), 1e-12);
  }
}

TEST(GenCommutator, ReducesToCommutatorForHermitian) {
  Rng rng(3);
  const auto a = random_hermitian(rng, 3), b = random_hermitian(rng, 3);
  EXPECT_LT(oracle::max_abs_diff(gen_commutator(a, b), commutator(a, b)), 1e-15);
  EXPECT_EQ(gen_commutator(ComplexMatrix(3, 3), b).max_abs(), 0.0);
}

TEST(GenCommutator, MinusITimesResultIsHermitian) {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto a = random_ginibre(rng, 4, 4), b = random_hermitian(rng, 4);
    EXPECT_LT(hermiticity_residual(gen_commutator(a, b) * cplx{0.0, -1.0}), 1e-13);
  }
  EXPECT_THROW(gen_commutator(ComplexMatrix(2, 2), ComplexMatrix(3, 3)), DimensionError);
}

TEST(SolveParent, ZeroCorrelationGivesZero) {
  Rng rng(5);
  const auto dec = decompose({kron(random_density(rng, 2, 0), random_density(rng, 2, 1)), {2, 2}});
  EXPECT_LT(solve_parent(dec).h_chi.max_abs(), 1e-12);
}

TEST(SolveParent, JaynesCummingsBathComponents) {
  JCParams p;
  for (double lt : {0.3, 0.9, 2.0}) {
    const double tau = lt / p.lambda;
    const auto dec = jc_exact(p, tau).dec;
    const auto parent = solve_parent(dec);
    const auto comps = expand_bipartite(parent.h_chi, build_basis(2), dec.dims);
    const auto expected = jc_bath_parent_closed_form(p, tau);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_LT(oracle::max_abs_diff(comps[k], expected[k]), 1e-10) << k;
  }
}

TEST(SolveParent, RoundTripOnRandomTwoQubitStates) {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto dec = decompose(random_joint(rng, {2, 2}, 1 + i % 4));
    const auto parent = solve_parent(dec);
    const auto rec = reconstruct_chi(parent.h_chi, dec);
    EXPECT_LE((rec - dec.chi).frobenius_norm(), 1e-8 * dec.chi.frobenius_norm());
    EXPECT_LE(parent.reconstruction_residual, 1e-8);
    EXPECT_LE(hermiticity_residual(rec), 1e-12);
  }
}

TEST(SolveParent, RoundTripAcrossDimensionsAndRanks) {
  Rng rng(7);
  for (std::size_t ds = 2; ds <= 4; ++ds)
    for (std::size_t db = 2; db <= 4; ++db)
      for (std::size_t rank : {1, 2, 0}) {
        const auto dec = decompose(random_joint(rng, {ds, db}, rank));
        EXPECT_LE(solve_parent(dec).reconstruction_residual, 1e-8) << ds << "x" << db << " rank " << rank;
      }
}

TEST(NullCompatibility, ProductStateIsZero) {
  Rng rng(8);
  const auto dec = decompose({kron(random_density(rng, 2, 1), random_density(rng, 3, 1)), {2, 3}});
  EXPECT_LE(check_null_compatibility(dec), 1e-14);
}

TEST(NullCompatibility, PureEntangledAndRankThreeStates) {
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    EXPECT_LE(check_null_compatibility(decompose(random_joint(rng, {2, 2}, 1))), 1e-12);
    EXPECT_LE(check_null_compatibility(decompose(random_joint(rng, {2, 3}, 3))), 1e-12);
  }
}

TEST(NullCompatibility, ThousandRandomStates) {
  Rng rng(10);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const BipartiteDims d{2 + i % 3, 2 + (i / 3) % 3};
    worst = std::max(worst, check_null_compatibility(decompose(random_joint(rng, d, 1 + i % 3))));
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(NullCompatibility, DetectsTracefulPerturbation) {
  // Pure product marginals leave a non-trivial null space for the perturbation to land in.
  ComplexVector e0{1.0, 0.0};
  const auto pure = ComplexMatrix::outer(e0, e0);
  auto dec = decompose({kron(pure, pure), {2, 2}});
  dec.chi += ComplexMatrix::identity(4) * 1e-3;
  EXPECT_GT(check_null_compatibility(dec), 1e-4);
  EXPECT_GT(solve_parent(dec).reconstruction_residual, 1e-4);
}
