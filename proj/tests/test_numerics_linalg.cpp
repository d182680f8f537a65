#include <gtest/gtest.h>

#include <complex>

#include "riscov/eig.hpp"
#include "riscov/matrix.hpp"
#include "riscov/qb.hpp"
#include "riscov/rng.hpp"
#include "riscov/svd.hpp"
#include "support/oracles.hpp"

using namespace riscov;
using riscov::testing::random_complex_matrix;
using riscov::testing::random_rank_k;
using cd = std::complex<double>;

namespace {

double reconstruction_error(const CMat& a, const SvdResult& r) {
  CMat us = r.left_vectors;
  for (std::size_t j = 0; j < r.singular_values.size(); ++j)
    for (std::size_t i = 0; i < us.rows(); ++i) us(i, j) *= r.singular_values[j];
  const CMat rec = us * r.right_vectors.adjoint();
  return (a - rec).frobenius_norm() / std::max(1e-300, a.frobenius_norm());
}

double orthonormality_defect(const CMat& u) {
  const CMat g = u.adjoint() * u;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const cd expect = (i == j) ? cd{1.0, 0.0} : cd{0.0, 0.0};
      worst = std::max(worst, std::abs(g(i, j) - expect));
    }
  return worst;
}

}  // namespace

TEST(Svd, IdentityThreeByThree) {
  const auto r = svd(CMat::identity(3));
  ASSERT_EQ(r.singular_values.size(), 3u);
  for (double s : r.singular_values) EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Svd, RankOneOuterProductNormProduct) {
  // u with norm 2, v with norm 3: single singular value 6.
  CMat a(3, 4);
  const cd u[3] = {cd{1.2, 0.4}, cd{-0.8, 1.0}, cd{0.3, -0.9}};
  double un = 0.0;
  for (const auto& x : u) un += std::norm(x);
  const double uscale = 2.0 / std::sqrt(un);
  const cd v[4] = {cd{0.5, -0.1}, cd{1.4, 0.2}, cd{-0.6, 0.8}, cd{0.9, 0.3}};
  double vn = 0.0;
  for (const auto& x : v) vn += std::norm(x);
  const double vscale = 3.0 / std::sqrt(vn);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      a(i, j) = (u[i] * uscale) * std::conj(v[j] * vscale);
  const auto r = svd(a);
  EXPECT_NEAR(r.singular_values[0], 6.0, 1e-9);
  for (std::size_t k = 1; k < r.singular_values.size(); ++k)
    EXPECT_NEAR(r.singular_values[k], 0.0, 1e-9);
}

TEST(Svd, SeededReconstructionAgainstJacobiOracle) {
  RngStream rng(42, 7);
  const CMat a = random_complex_matrix(4, 4, rng);
  const auto r = svd(a);
  EXPECT_LT(reconstruction_error(a, r), 1e-9);
  const auto oracle = riscov::testing::jacobi_singular_values(a);
  ASSERT_EQ(oracle.size(), r.singular_values.size());
  for (std::size_t i = 0; i < oracle.size(); ++i)
    EXPECT_NEAR(r.singular_values[i], oracle[i], 1e-9 * oracle[0]);
}

TEST(Svd, ShapesAndRankDeficiency) {
  RngStream rng(1234, 0);
  const std::pair<std::size_t, std::size_t> shapes[] = {
      {5, 3}, {3, 5}, {8, 8}, {16, 4}, {4, 16}, {1, 6}, {6, 1}, {2, 2}};
  for (auto [m, n] : shapes) {
    CMat a = random_complex_matrix(m, n, rng);
    auto r = svd(a);
    EXPECT_LT(reconstruction_error(a, r), 1e-9) << m << "x" << n;
    EXPECT_LT(orthonormality_defect(r.left_vectors), 1e-9);
    EXPECT_LT(orthonormality_defect(r.right_vectors), 1e-9);
    for (std::size_t i = 0; i + 1 < r.singular_values.size(); ++i)
      EXPECT_GE(r.singular_values[i], r.singular_values[i + 1]);
    auto oracle = riscov::testing::jacobi_singular_values(a);
    for (std::size_t i = 0; i < oracle.size(); ++i)
      EXPECT_NEAR(r.singular_values[i], oracle[i], 1e-8 * std::max(1.0, oracle[0]));
  }
  // Rank-deficient inputs keep the reconstruction property.
  for (std::size_t k : {1u, 2u, 3u}) {
    CMat a = random_rank_k(7, 5, k, rng);
    auto r = svd(a);
    EXPECT_LT(reconstruction_error(a, r), 1e-9);
    for (std::size_t i = k; i < r.singular_values.size(); ++i)
      EXPECT_LT(r.singular_values[i], 1e-9 * r.singular_values[0]);
  }
}

TEST(Svd, NonFiniteInputRejected) {
  CMat a(2, 2);
  a(0, 0) = cd{std::numeric_limits<double>::quiet_NaN(), 0.0};
  EXPECT_THROW(svd(a), InvalidInput);
  EXPECT_THROW(svd(CMat(0, 0)), InvalidInput);
}

TEST(EigHermitian, DiagonalCase) {
  CMat c(3, 3);
  c(0, 0) = 3.0;
  c(1, 1) = 1.0;
  c(2, 2) = 2.0;
  const auto r = eig_hermitian(c);
  ASSERT_EQ(r.values.size(), 3u);
  EXPECT_NEAR(r.values[0], 3.0, 1e-12);
  EXPECT_NEAR(r.values[1], 2.0, 1e-12);
  EXPECT_NEAR(r.values[2], 1.0, 1e-12);
}

TEST(EigHermitian, TwoByTwoSymmetry) {
  CMat c(2, 2);
  c(0, 1) = 1.0;
  c(1, 0) = 1.0;
  const auto r = eig_hermitian(c);
  EXPECT_NEAR(r.values[0], 1.0, 1e-12);
  EXPECT_NEAR(r.values[1], -1.0, 1e-12);
}

TEST(EigHermitian, ResidualAndOrthonormality) {
  RngStream rng(99, 3);
  for (std::size_t n : {2u, 3u, 5u, 8u, 17u}) {
    const CMat b = random_complex_matrix(n, n, rng);
    const CMat c = b * b.adjoint();  // Hermitian PSD
    const auto r = eig_hermitian(c);
    EXPECT_LT(orthonormality_defect(r.vectors), 1e-9);
    // c v_i = lambda_i v_i within 1e-8 (relative to spectrum scale)
    const double scale = std::max(1.0, std::fabs(r.values[0]));
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<cd> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = r.vectors(i, j);
      const auto cv = matvec(c, v);
      for (std::size_t i = 0; i < n; ++i)
        EXPECT_NEAR(std::abs(cv[i] - r.values[j] * v[i]), 0.0, 1e-8 * scale);
    }
  }
}

TEST(EigHermitian, MatchesSquaredSingularValues) {
  RngStream rng(4242, 1);
  const CMat b = random_complex_matrix(6, 4, rng);
  const auto ev = eig_hermitian(b.adjoint() * b);
  const auto sv = svd(b);
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_NEAR(ev.values[i], sv.singular_values[i] * sv.singular_values[i],
                1e-8 * std::max(1.0, ev.values[0]));
}

TEST(EigHermitian, RejectsNonHermitian) {
  CMat c(2, 2);
  c(0, 1) = cd{1.0, 0.0};
  c(1, 0) = cd{2.0, 0.0};
  EXPECT_THROW(eig_hermitian(c), InvalidInput);
}

TEST(RandomizedQb, RankOneTerminatesAtOne) {
  RngStream rng(7, 7);
  const CMat a = random_rank_k(6, 6, 1, rng);
  auto r = randomized_qb(a, 2, 1e-8, rng);
  EXPECT_EQ(r.tau, 1u);
  EXPECT_FALSE(r.saturated);
  EXPECT_LT((a - r.q * r.b).frobenius_norm() / a.frobenius_norm(), 1e-8);
}

TEST(RandomizedQb, ZeroMatrixEmptyFactors) {
  RngStream rng(7, 8);
  auto r = randomized_qb(CMat(5, 4), 2, 1e-8, rng);
  EXPECT_EQ(r.tau, 0u);
  EXPECT_EQ(r.q.cols(), 0u);
  EXPECT_EQ(r.b.rows(), 0u);
}

TEST(RandomizedQb, RankThreeMatchesSvdRank) {
  RngStream rng(21, 5);
  const CMat a = random_rank_k(8, 8, 3, rng);
  auto r = randomized_qb(a, 2, 1e-8, rng);
  EXPECT_EQ(r.tau, 3u);
  EXPECT_LT((a - r.q * r.b).frobenius_norm() / a.frobenius_norm(), 1e-8);
  // Full SVD oracle agrees on the numerical rank.
  const auto sv = svd(a);
  std::size_t rank = 0;
  for (double s : sv.singular_values)
    if (s > 1e-8 * sv.singular_values[0]) ++rank;
  EXPECT_EQ(rank, 3u);
}

TEST(RandomizedQb, FullRankSaturation) {
  RngStream rng(3, 1);
  const CMat a = random_complex_matrix(6, 6, rng);
  auto r = randomized_qb(a, 2, 1e-14, rng);
  EXPECT_EQ(r.tau, 6u);
  EXPECT_TRUE(r.saturated || r.rel_residual <= 1e-14);
  EXPECT_LT((a - r.q * r.b).frobenius_norm() / a.frobenius_norm(), 1e-10);
}

TEST(RandomizedQb, RankBudgetCap) {
  RngStream rng(3, 2);
  const CMat a = random_complex_matrix(12, 12, rng);
  auto r = randomized_qb(a, 4, 1e-12, rng, 6);
  EXPECT_EQ(r.tau, 6u);
  EXPECT_TRUE(r.rank_capped);
  EXPECT_GT(r.rel_residual, 0.0);
}

TEST(RandomizedQb, QbThenEigReproducesSingularValues) {
  // Cross-kernel pipeline property at full rank.
  RngStream rng(11, 11);
  const CMat a = random_complex_matrix(10, 6, rng);
  auto r = randomized_qb(a, 3, 1e-13, rng);
  ASSERT_EQ(r.tau, 6u);
  const auto ev = eig_hermitian(r.b * r.b.adjoint());
  const auto sv = svd(a);
  for (std::size_t i = 0; i < 6; ++i)
    EXPECT_NEAR(std::sqrt(std::max(0.0, ev.values[i])), sv.singular_values[i],
                1e-6 * std::max(1.0, sv.singular_values[0]));
}

TEST(Svd, Sigma1SquaredEqualsTopEigenvalue) {
  RngStream rng(5150, 2);
  const CMat a = random_complex_matrix(7, 5, rng);
  const auto sv = svd(a);
  const auto ev = eig_hermitian(a.adjoint() * a);
  EXPECT_NEAR(sv.singular_values[0] * sv.singular_values[0], ev.values[0],
              1e-8 * std::max(1.0, ev.values[0]));
}
