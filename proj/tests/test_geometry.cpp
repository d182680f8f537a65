#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "riscov/geometry.hpp"
#include "riscov/rng.hpp"
#include "riscov/special_functions.hpp"

using namespace riscov;

TEST(Ppp, ZeroDensityEmpty) {
  RngStream rng(1, 0);
  EXPECT_TRUE(sample_ppp_disk(0.0, 100.0, rng).empty());
}

TEST(Ppp, MeanCountMatchesIntensity) {
  // lambda pi R^2: 1.5e-4 -> 4.712 (the sparse reference case), 5e-4 -> 15.71.
  RngStream rng(2, 0);
  const int reps = 10000;
  double count_sparse = 0.0, count_mid = 0.0;
  for (int i = 0; i < reps; ++i) {
    count_sparse += static_cast<double>(sample_ppp_disk(1.5e-4, 100.0, rng).size());
    count_mid += static_cast<double>(sample_ppp_disk(5e-4, 100.0, rng).size());
  }
  EXPECT_NEAR(count_sparse / reps, 4.712, 0.15);
  EXPECT_NEAR(count_mid / reps, 15.71, 0.3);
}

TEST(Ppp, CountMeanAndVarianceWithinThreeStandardErrors) {
  RngStream rng(3, 0);
  const double lambda = 1e-3, R = 100.0;
  const double expect = lambda * std::numbers::pi * R * R;
  const int reps = 10000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < reps; ++i) {
    const double k = static_cast<double>(sample_ppp_disk(lambda, R, rng).size());
    s += k;
    s2 += k * k;
  }
  const double mean = s / reps;
  const double var = s2 / reps - mean * mean;
  const double se_mean = std::sqrt(expect / reps);
  EXPECT_NEAR(mean, expect, 3.0 * se_mean);
  const double se_var = expect * std::sqrt(2.0 / reps + 1.0 / (expect * reps));
  EXPECT_NEAR(var, expect, 3.0 * se_var + 1.0);
}

TEST(Ppp, RadialCdfUniformityByKs) {
  RngStream rng(4, 0);
  const double R = 100.0;
  std::vector<double> radii;
  while (radii.size() < 20000) {
    for (const auto& p : sample_ppp_disk(2e-3, R, rng))
      radii.push_back(std::hypot(p.x, p.y));
  }
  std::sort(radii.begin(), radii.end());
  double ks = 0.0;
  const double n = static_cast<double>(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double f = (radii[i] / R) * (radii[i] / R);
    ks = std::max(ks, std::fabs(f - static_cast<double>(i + 1) / n));
    ks = std::max(ks, std::fabs(f - static_cast<double>(i) / n));
  }
  EXPECT_LT(ks, 1.628 / std::sqrt(n));  // 1% significance
}

TEST(Pcp, OffspringMeanPerParent) {
  RngStream rng(5, 0);
  PcpParams params{1e-4, 3.0, 10.0};
  const int reps = 4000;
  double parents_mean = 1e-4 * std::numbers::pi * 1e4;
  double total = 0.0;
  for (int i = 0; i < reps; ++i)
    total += static_cast<double>(sample_pcp_disk(params, 100.0, rng).size());
  EXPECT_NEAR(total / reps, parents_mean * 3.0, 0.3);
}

TEST(Pcp, DegenerateScatterCoincidesWithParents) {
  RngStream rng(6, 0);
  PcpParams params{5e-4, 2.0, 0.0};
  const auto pts = sample_pcp_disk(params, 100.0, rng);
  // Every offspring sits exactly on some parent: with zero scatter the
  // cluster collapses, so pairwise-distinct positions come in groups.
  for (const auto& p : pts) {
    int coincident = 0;
    for (const auto& q : pts)
      if (p.x == q.x && p.y == q.y) ++coincident;
    EXPECT_GE(coincident, 1);
  }
}

TEST(Pcp, IntensityMatchedToPpp) {
  // Parent density chosen so total intensity equals 5.5e-3 per m^2.
  RngStream rng(7, 0);
  const double lambda_total = 5.5e-3;
  PcpParams params{lambda_total / 3.0, 3.0, 25.0};
  const int reps = 10000;
  double pcp_total = 0.0, ppp_total = 0.0;
  for (int i = 0; i < reps; ++i) {
    pcp_total += static_cast<double>(sample_pcp_disk(params, 100.0, rng).size());
    ppp_total += static_cast<double>(sample_ppp_disk(lambda_total, 100.0, rng).size());
  }
  EXPECT_NEAR(pcp_total / ppp_total, 1.0, 0.05);
}

TEST(LosProbability, InnerRadiusAlwaysLos) {
  for (double h : {1.5, 10.0, 23.0})
    EXPECT_DOUBLE_EQ(los_probability(10.0, h), 1.0);
  EXPECT_DOUBLE_EQ(los_probability(18.0, 1.5), 1.0);
}

TEST(LosProbability, DirectEvaluationAtFiftyMeters) {
  EXPECT_NEAR(los_probability(50.0, 1.5), 0.6494, 1e-4);
}

TEST(LosProbability, HeightCorrectionBoundary) {
  // At h_ut = 23 the correction coefficient is exactly one.
  const double d = 50.0;
  const double base = 18.0 / d + std::exp(-d / 63.0) * (1.0 - 18.0 / d);
  const double lifted = base * (1.0 + 1.25 * std::pow(d / 100.0, 3.0) * std::exp(-d / 150.0));
  EXPECT_NEAR(los_probability(d, 23.0), std::min(1.0, lifted), 1e-12);
  EXPECT_THROW(los_probability(50.0, 23.5), InvalidInput);
}

TEST(LosProbability, ContinuousAtBreakpointAndMonotone) {
  for (double h : {1.5, 13.0}) {
    EXPECT_NEAR(los_probability(18.0 + 1e-9, h), 1.0, 1e-6);
    double prev = 1.0;
    for (double d = 18.0; d < 300.0; d += 1.0) {
      const double p = los_probability(d, h);
      EXPECT_LE(p, prev + 1e-9);
      prev = p;
    }
  }
}

TEST(Thinning, AllRetainedInsideEighteenMeters) {
  RngStream rng(8, 0);
  std::vector<Point2D> pts;
  for (int i = 0; i < 200; ++i) pts.push_back({rng.uniform(-12.0, 12.0), rng.uniform(-12.0, 12.0)});
  const auto marks = thin_los(pts, {0.0, 0.0}, 1.5, rng);
  for (bool m : marks) EXPECT_TRUE(m);
}

TEST(Thinning, ConstantProbabilityStub) {
  RngStream rng(9, 0);
  std::vector<Point2D> pts(100000);
  const auto marks = thin_by(pts, [](const Point2D&) { return 0.5; }, rng);
  const double frac =
      static_cast<double>(std::count(marks.begin(), marks.end(), true)) / marks.size();
  EXPECT_NEAR(frac, 0.5, 0.01);
}

TEST(Thinning, RetainedIntensityMatchesLosProbability) {
  // Annulus around radius 50: retained fraction ~ los_probability(50).
  RngStream rng(10, 0);
  const double lambda = 1e-3, R = 100.0;
  std::size_t in_annulus = 0, retained = 0;
  for (int rep = 0; rep < 4000; ++rep) {
    const auto pts = sample_ppp_disk(lambda, R, rng);
    const auto marks = thin_los(pts, {0.0, 0.0}, 1.5, rng);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double r = std::hypot(pts[i].x, pts[i].y);
      if (r > 47.5 && r < 52.5) {
        ++in_annulus;
        if (marks[i]) ++retained;
      }
    }
  }
  ASSERT_GT(in_annulus, 1000u);
  const double frac = static_cast<double>(retained) / static_cast<double>(in_annulus);
  EXPECT_NEAR(frac, los_probability(50.0, 1.5), 0.05 * los_probability(50.0, 1.5));
}

TEST(Thinning, MarksIndependentOfAngle) {
  // Chi-square over 8 angular bins of retained points at 1% significance.
  RngStream rng(11, 0);
  const int bins = 8;
  std::vector<double> counts(bins, 0.0);
  double total = 0.0;
  for (int rep = 0; rep < 3000; ++rep) {
    const auto pts = sample_ppp_disk(1e-3, 100.0, rng);
    const auto marks = thin_los(pts, {0.0, 0.0}, 1.5, rng);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!marks[i]) continue;
      double a = std::atan2(pts[i].y, pts[i].x);
      if (a < 0) a += 2.0 * std::numbers::pi;
      counts[static_cast<int>(a / (2.0 * std::numbers::pi) * bins) % bins] += 1.0;
      total += 1.0;
    }
  }
  const double expect = total / bins;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expect) * (c - expect) / expect;
  // dof = 7; p-value from the regularized upper gamma.
  const double pval = regularized_gamma_q(3.5, chi2 / 2.0);
  EXPECT_GT(pval, 0.01);
}
