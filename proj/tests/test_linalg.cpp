#include <gtest/gtest.h>

#include <numbers>

#include "corrpic/random.hpp"
#include "oracles.hpp"

using namespace corrpic;

namespace {

const ComplexMatrix kSx(2, 2, {0.0, 1.0, 1.0, 0.0});
const ComplexMatrix kSy(2, 2, {0.0, cplx{0, -1}, cplx{0, 1}, 0.0});
const ComplexMatrix kSz(2, 2, {1.0, 0.0, 0.0, -1.0});

ComplexMatrix random_psd(Rng& rng, std::size_t n, std::size_t rank) {
  const auto g = random_ginibre(rng, n, rank);
  return hermitize(g * g.adjoint());
}

}  // namespace

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_EQ(oracle::max_abs_diff(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
                                 ComplexMatrix::identity(4)), 0.0);
}

TEST(Kron, SigmaZTimesIdentity) {
  const std::vector<double> d{1, 1, -1, -1};
  EXPECT_EQ(oracle::max_abs_diff(kron(kSz, ComplexMatrix::identity(2)), ComplexMatrix::diagonal(d)), 0.0);
}

TEST(Kron, MatchesElementwiseOracleAndTraceFactorizes) {
  Rng rng(11);
  const auto a = random_ginibre(rng, 3, 3);
  const auto b = random_ginibre(rng, 2, 2);
  const auto k = kron(a, b);
  EXPECT_LT(oracle::max_abs_diff(k, oracle::kron(a, b)), 1e-15);
  EXPECT_LT(std::abs(k.trace() - a.trace() * b.trace()), 1e-12);
}

TEST(PartialTrace, ProductStateReturnsFactor) {
  Rng rng(2);
  const auto rs = random_density(rng, 3, 0);
  const auto rb = random_density(rng, 2, 0);
  const auto r = partial_trace(kron(rs, rb), {3, 2}, TraceOver::B);
  EXPECT_LT(oracle::max_abs_diff(r, rs), 1e-15);
}

TEST(PartialTrace, BellStateIsMaximallyMixed) {
  ComplexVector phi{1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
  const auto rho = ComplexMatrix::outer(phi, phi);
  EXPECT_LT(oracle::max_abs_diff(partial_trace(rho, {2, 2}, TraceOver::B), ComplexMatrix::identity(2) * 0.5), 1e-15);
  EXPECT_LT(oracle::max_abs_diff(partial_trace(rho, {2, 2}, TraceOver::S), ComplexMatrix::identity(2) * 0.5), 1e-15);
}

TEST(PartialTrace, MatchesIndexSummationOracle) {
  Rng rng(3);
  for (const BipartiteDims d : {BipartiteDims{2, 2}, BipartiteDims{2, 3}, BipartiteDims{3, 4}}) {
    const auto m = random_hermitian(rng, d.joint(), 3.0);
    EXPECT_LT(oracle::max_abs_diff(partial_trace(m, d, TraceOver::S), oracle::trace_out_s(m, d)), 1e-14);
    EXPECT_LT(oracle::max_abs_diff(partial_trace(m, d, TraceOver::B), oracle::trace_out_b(m, d)), 1e-14);
  }
}

TEST(PartialTrace, KronPropertyOnRandomPairs) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_ginibre(rng, 3, 3);
    const auto b = random_ginibre(rng, 4, 4);
    EXPECT_LT(oracle::max_abs_diff(partial_trace(kron(a, b), {3, 4}, TraceOver::B), a * b.trace()), 1e-12);
  }
}

TEST(PartialTrace, RejectsWrongSide) {
  EXPECT_THROW(partial_trace(ComplexMatrix::identity(5), {2, 2}, TraceOver::B), DimensionError);
}

TEST(HermitianEig, DiagonalIsSorted) {
  const std::vector<double> d{3, 1, 2};
  const auto eig = hermitian_eig(ComplexMatrix::diagonal(d));
  EXPECT_EQ(eig.values, (std::vector<double>{1, 2, 3}));
}

TEST(HermitianEig, PauliX) {
  const auto eig = hermitian_eig(kSx);
  EXPECT_NEAR(eig.values[0], -1.0, 1e-15);
  EXPECT_NEAR(eig.values[1], 1.0, 1e-15);
  // Eigenvector of -1 is (|0> - |1>)/sqrt(2) up to phase.
  EXPECT_NEAR(std::abs(eig.vectors(0, 0) + eig.vectors(1, 0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eig.vectors(0, 0)), 1.0 / std::sqrt(2.0), 1e-14);
}

TEST(HermitianEig, ReconstructsRandomMatricesUpToSide64) {
  Rng rng(5);
  for (std::size_t n : {2, 6, 17, 64}) {
    const auto m = random_hermitian(rng, n, static_cast<double>(n));
    const auto eig = hermitian_eig(m);
    const auto rec = eig.vectors * ComplexMatrix::diagonal(eig.values) * eig.vectors.adjoint();
    EXPECT_LE((rec - m).frobenius_norm(), 1e-10 * m.frobenius_norm()) << "n=" << n;
    EXPECT_LE((eig.vectors * eig.vectors.adjoint() - ComplexMatrix::identity(n)).frobenius_norm(), 1e-10);
    EXPECT_TRUE(std::is_sorted(eig.values.begin(), eig.values.end()));
  }
}

TEST(HermitianEig, RejectsNonHermitian) {
  ComplexMatrix m(2, 2, {1.0, 1.0, 0.0, 1.0});
  EXPECT_THROW(hermitian_eig(m), PreconditionError);
}

TEST(MatrixExp, ZeroTimeIsIdentity) {
  Rng rng(6);
  const auto h = random_hermitian(rng, 4);
  EXPECT_LT(oracle::max_abs_diff(propagator(h, 0.0), ComplexMatrix::identity(4)), 1e-14);
}

TEST(MatrixExp, PauliRotation) {
  const auto u = matrix_exp(kSx * cplx{0.0, -0.5 * std::numbers::pi});
  EXPECT_LT(oracle::max_abs_diff(u, kSx * cplx{0.0, -1.0}), 1e-14);
}

TEST(MatrixExp, MatchesTaylorOracle) {
  Rng rng(7);
  const auto h = random_hermitian(rng, 5, 2.0);
  const auto m = h * cplx{0.0, -0.37};
  EXPECT_LT(oracle::max_abs_diff(matrix_exp(m), oracle::taylor_exp(m)), 1e-10);
}

TEST(MatrixExp, UnitaryForLargeNormTimesTime) {
  Rng rng(8);
  for (double t : {0.1, 5.0, 50.0}) {
    auto h = random_hermitian(rng, 8, 1.0);
    h = h * (1.0 / hermitian_eig(h).values.back());
    const auto u = propagator(h * 1.0, t);
    EXPECT_LE((u * u.adjoint() - ComplexMatrix::identity(8)).frobenius_norm(), 1e-10) << "t=" << t;
  }
}

TEST(MatrixExp, RejectsNonAntiHermitian) {
  EXPECT_THROW(matrix_exp(kSx), PreconditionError);
}

TEST(PseudoInverse, IdentityAndProjector) {
  EXPECT_LT(oracle::max_abs_diff(pseudo_inverse(ComplexMatrix::identity(2)), ComplexMatrix::identity(2)), 1e-15);
  const std::vector<double> p{1, 0};
  EXPECT_LT(oracle::max_abs_diff(pseudo_inverse(ComplexMatrix::diagonal(p)), ComplexMatrix::diagonal(p)), 1e-15);
}

TEST(PseudoInverse, ZeroMatrixGivesZero) {
  EXPECT_EQ(pseudo_inverse(ComplexMatrix(3, 3)).max_abs(), 0.0);
}

TEST(PseudoInverse, PenroseConditionsOnRankDeficientPsd) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + trial % 3;
    const auto m = random_psd(rng, n, 2);
    const auto p = pseudo_inverse(m);
    EXPECT_LT((m * p * m - m).frobenius_norm(), 1e-9);
    EXPECT_LT((p * m * p - p).frobenius_norm(), 1e-9);
    EXPECT_LT(hermiticity_residual(m * p), 1e-9);
    EXPECT_LT(hermiticity_residual(p * m), 1e-9);
  }
}

TEST(NullProjector, FullRankAndDiagonal) {
  EXPECT_EQ(null_projector(ComplexMatrix::identity(2)).max_abs(), 0.0);
  const std::vector<double> p{1, 0}, q{0, 1};
  EXPECT_LT(oracle::max_abs_diff(null_projector(ComplexMatrix::diagonal(p)), ComplexMatrix::diagonal(q)), 1e-15);
}

TEST(NullProjector, AnnihilatesRandomRankDeficientPsd) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_psd(rng, 5, 3);
    const auto p0 = null_projector(m);
    EXPECT_LT((p0 * m).frobenius_norm(), 1e-9);
    EXPECT_LT((p0 * p0 - p0).frobenius_norm(), 1e-10);
    EXPECT_LT(hermiticity_residual(p0), 1e-10);
    EXPECT_NEAR(p0.trace().real(), 2.0, 1e-10);
  }
}

TEST(HsInner, BasicValues) {
  EXPECT_NEAR(std::abs(hs_inner(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) - 2.0), 0.0, 1e-15);
  EXPECT_EQ(std::abs(hs_inner(kSx, kSy)), 0.0);
}

TEST(HsInner, ConjugateSymmetric) {
  Rng rng(12);
  const auto a = random_ginibre(rng, 4, 4);
  const auto b = random_ginibre(rng, 4, 4);
  EXPECT_LT(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))), 1e-13);
  EXPECT_THROW(hs_inner(a, ComplexMatrix::identity(3)), DimensionError);
}
