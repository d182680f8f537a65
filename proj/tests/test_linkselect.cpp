#include <gtest/gtest.h>

#include <cmath>

#include "riscov/linkselect.hpp"
#include "riscov/rng.hpp"
#include "support/oracles.hpp"

using namespace riscov;
using riscov::testing::random_complex_matrix;
using cd = std::complex<double>;

namespace {

SystemConfig desk_config() {
  SystemConfig cfg;
  cfg.resolve();
  return cfg;
}

RisCandidate make_candidate(std::size_t L, std::size_t nb, std::size_t nu, double ds,
                            double dr, std::size_t id, RngStream& rng) {
  RisCandidate c;
  c.h = random_complex_matrix(L, nb, rng);
  c.g = random_complex_matrix(L, nu, rng);
  c.dist_bs_ris = ds;
  c.dist_ris_ue = dr;
  c.id = id;
  return c;
}

}  // namespace

TEST(SinrDirect, FormulaContractAndLinearity) {
  auto cfg = desk_config();
  CMat h_d(1, 1);
  h_d(0, 0) = cd{1.0, 0.0};
  const double r = 50.0;
  const double got = sinr_direct(h_d, cfg, r, 0.0);
  const double expect = cfg.tx_pattern.main_lobe_gain * cfg.rx_pattern.main_lobe_gain *
                        cfg.tx_power_w * pathloss_bs_ue(r, cfg) / cfg.noise_w;
  EXPECT_NEAR(got, expect, 1e-12 * expect);

  // Doubling the transmit main lobe doubles the SINR.
  auto cfg2 = cfg;
  cfg2.tx_main_lobe_db = linear_to_db(2.0 * cfg.tx_pattern.main_lobe_gain);
  cfg2.tx_side_lobe_db = linear_to_db(cfg.tx_pattern.side_lobe_gain);
  cfg2.resolve();
  EXPECT_NEAR(sinr_direct(h_d, cfg2, r, 0.0), 2.0 * got, 1e-9 * got);
}

TEST(SinrDirect, MeanOverFadingMatchesClosedForm) {
  auto cfg = desk_config();
  RngStream rng(31, 0);
  FadingLink link{cfg.nakagami_m_los, 1.0, 50.0};
  const int n = 100000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const CMat h_d = sample_channel_matrix(1, 1, link, rng);
    acc += sinr_direct(h_d, cfg, 50.0, 0.0);
  }
  const double expect = cfg.tx_pattern.main_lobe_gain * cfg.rx_pattern.main_lobe_gain *
                        cfg.tx_power_w * pathloss_bs_ue(50.0, cfg) / cfg.noise_w;
  EXPECT_NEAR(acc / n, expect, 0.01 * expect);
}

TEST(SinrReflective, UnitCascadeLiteralFormula) {
  auto cfg = desk_config();
  cfg.antenna_gain_bs_dbi = 0.0;
  cfg.antenna_gain_ris_dbi = 0.0;
  cfg.antenna_gain_ue_dbi = 0.0;
  cfg.resolve();
  RisCandidate c;
  c.h = CMat(1, 1);
  c.h(0, 0) = cd{1.0, 0.0};
  c.g = CMat(1, 1);
  c.g(0, 0) = cd{1.0, 0.0};
  c.dist_bs_ris = 30.0;
  c.dist_ris_ue = 20.0;
  PhasePlan plan{{{0.0}}, PhaseScheme::Optimal};
  const double got = sinr_reflective({c}, plan, cfg, 0.0);
  const double a = cfg.path_loss_exponent;
  const double expect = cfg.tx_pattern.main_lobe_gain * cfg.rx_pattern.main_lobe_gain *
                        cfg.tx_power_w * cfg.zeta * cfg.zeta *
                        std::pow(30.0 * 20.0, -a) / cfg.noise_w;
  EXPECT_NEAR(got, expect, 1e-12 * expect);
}

TEST(SinrReflective, DistanceProductPowerLaw) {
  auto cfg = desk_config();
  RngStream rng(32, 0);
  RisCandidate c = make_candidate(4, 1, 1, 40.0, 30.0, 0, rng);
  const PhasePlan plan = optimal_phases(c.h, c.g);
  const double far = sinr_reflective({c}, plan, cfg, 0.0);
  c.dist_bs_ris = 20.0;
  c.dist_ris_ue = 15.0;
  const double near = sinr_reflective({c}, plan, cfg, 0.0);
  EXPECT_NEAR(near / far, std::pow(2.0, 2.0 * cfg.path_loss_exponent), 1e-9);
}

TEST(SinrReflective, OptimalBeatsRandomPaired) {
  auto cfg = desk_config();
  RngStream rng(33, 0);
  int wins = 0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) {
    RngStream local = rng.substream(s);
    RisCandidate c = make_candidate(16, 1, 1, 35.0, 25.0, 0, local);
    const PhasePlan opt = optimal_phases(c.h, c.g);
    const PhasePlan rnd = random_phases({16}, local);
    if (sinr_reflective({c}, opt, cfg, 0.0) > sinr_reflective({c}, rnd, cfg, 0.0)) ++wins;
  }
  EXPECT_GE(wins, seeds * 95 / 100);
}

TEST(SelectBestRis, SingleCandidateAndEmptyFallback) {
  auto cfg = desk_config();
  RngStream rng(34, 0);
  const CMat h_d = random_complex_matrix(1, 1, rng);
  std::vector<RisCandidate> cands{make_candidate(8, 1, 1, 30.0, 25.0, 7, rng)};
  const auto res = select_best_ris(cands, h_d, 50.0, cfg, 0.0);
  ASSERT_EQ(res.picked.size(), 1u);
  EXPECT_EQ(res.sinr.selected_ris[0], 7u);
  EXPECT_GT(res.sinr.reflective, 0.0);
  EXPECT_NEAR(res.sinr.total, res.sinr.direct + res.sinr.reflective, 1e-15);

  const auto none = select_best_ris({}, h_d, 50.0, cfg, 0.0);
  EXPECT_TRUE(none.picked.empty());
  EXPECT_DOUBLE_EQ(none.sinr.reflective, 0.0);
  EXPECT_GT(none.sinr.direct, 0.0);
}

TEST(SelectBestRis, MatchesExhaustiveEvaluation) {
  auto cfg = desk_config();
  RngStream rng(35, 0);
  const CMat h_d = random_complex_matrix(1, 1, rng);
  std::vector<RisCandidate> cands;
  for (std::size_t i = 0; i < 3; ++i)
    cands.push_back(make_candidate(8, 1, 1, 20.0 + 10.0 * i, 45.0 - 10.0 * i, i, rng));
  const auto res = select_best_ris(cands, h_d, 50.0, cfg, 0.0);
  double best = -1.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const PhasePlan p = optimal_phases(cands[i].h, cands[i].g);
    const double gi = sinr_reflective({cands[i]}, p, cfg, 0.0);
    if (gi > best) {
      best = gi;
      best_i = i;
    }
  }
  EXPECT_EQ(res.picked[0], best_i);
  EXPECT_NEAR(res.sinr.reflective, best, 1e-12 * best);
}

TEST(SelectBestRis, TieBreakBySmallestIndex) {
  auto cfg = desk_config();
  RngStream rng(36, 0);
  const CMat h_d = random_complex_matrix(1, 1, rng);
  RisCandidate base = make_candidate(8, 1, 1, 30.0, 25.0, 0, rng);
  RisCandidate twin = base;
  twin.id = 1;
  const auto res = select_best_ris({base, twin}, h_d, 50.0, cfg, 0.0);
  EXPECT_EQ(res.sinr.selected_ris[0], 0u);
}

TEST(SelectRisSubset, FullSetNoEnumeration) {
  auto cfg = desk_config();
  RngStream rng(37, 0);
  const CMat h_d = random_complex_matrix(1, 1, rng);
  std::vector<RisCandidate> cands;
  for (std::size_t i = 0; i < 4; ++i)
    cands.push_back(make_candidate(4, 1, 1, 25.0 + 5.0 * i, 40.0 - 5.0 * i, i, rng));
  const auto res = select_ris_subset(cands, 4, h_d, 50.0, cfg, 0.0);
  EXPECT_EQ(res.picked.size(), 4u);
  EXPECT_THROW(select_ris_subset(cands, 5, h_d, 50.0, cfg, 0.0), InvalidInput);
}

TEST(SelectRisSubset, KOneAgreesWithBestRis) {
  auto cfg = desk_config();
  RngStream rng(38, 0);
  const CMat h_d = random_complex_matrix(1, 1, rng);
  std::vector<RisCandidate> cands;
  for (std::size_t i = 0; i < 5; ++i)
    cands.push_back(make_candidate(6, 1, 1, 20.0 + 8.0 * i, 50.0 - 8.0 * i, i, rng));
  const auto a = select_ris_subset(cands, 1, h_d, 50.0, cfg, 0.0);
  const auto b = select_best_ris(cands, h_d, 50.0, cfg, 0.0);
  EXPECT_EQ(a.picked, b.picked);
  EXPECT_NEAR(a.sinr.total, b.sinr.total, 1e-12 * b.sinr.total);
}

TEST(SelectRisSubset, GreedyNearExhaustive) {
  auto cfg = desk_config();
  RngStream rng(39, 0);
  int close = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    RngStream local = rng.substream(s);
    const CMat h_d = random_complex_matrix(1, 1, local);
    std::vector<RisCandidate> cands;
    for (std::size_t i = 0; i < 4; ++i)
      cands.push_back(make_candidate(4, 1, 1, local.uniform(15.0, 60.0),
                                     local.uniform(15.0, 60.0), i, local));
    const auto ex = select_ris_subset(cands, 2, h_d, 50.0, cfg, 0.0, SubsetMode::Exhaustive);
    const auto gr = select_ris_subset(cands, 2, h_d, 50.0, cfg, 0.0, SubsetMode::Greedy);
    if (gr.sinr.reflective >= 0.95 * ex.sinr.reflective) ++close;
  }
  EXPECT_GE(close, 90);
}

TEST(SelectBestRis, DominatesEverySingleCandidate) {
  auto cfg = desk_config();
  RngStream rng(40, 0);
  const CMat h_d = random_complex_matrix(1, 1, rng);
  std::vector<RisCandidate> cands;
  for (std::size_t i = 0; i < 6; ++i)
    cands.push_back(make_candidate(8, 1, 1, rng.uniform(15.0, 70.0),
                                   rng.uniform(15.0, 70.0), i, rng));
  const auto res = select_best_ris(cands, h_d, 50.0, cfg, 0.0);
  for (const auto& c : cands) {
    const PhasePlan p = optimal_phases(c.h, c.g);
    const double total = sinr_reflective({c}, p, cfg, 0.0) + res.sinr.direct;
    EXPECT_GE(res.sinr.total, total * (1.0 - 1e-12));
  }
}

TEST(Sinr, MainLobeGainRaisesBothComponents) {
  // At fixed fading draws a larger transmit main lobe strictly increases
  // both the direct and the reflective SINR.
  auto cfg_small = desk_config();
  cfg_small.tx_main_lobe_db = 10.0;
  cfg_small.tx_side_lobe_db = -10.0;
  cfg_small.resolve();
  auto cfg_big = cfg_small;
  cfg_big.tx_main_lobe_db = 20.0;
  cfg_big.resolve();
  RngStream rng(41, 0);
  const CMat h_d = random_complex_matrix(1, 1, rng);
  const RisCandidate cand = make_candidate(8, 1, 1, 30.0, 25.0, 0, rng);
  const PhasePlan plan = optimal_phases(cand.h, cand.g);
  EXPECT_GT(sinr_direct(h_d, cfg_big, 50.0, 1e-11), sinr_direct(h_d, cfg_small, 50.0, 1e-11));
  EXPECT_GT(sinr_reflective({cand}, plan, cfg_big, 1e-11),
            sinr_reflective({cand}, plan, cfg_small, 1e-11));
}

TEST(WeightedSinr, BoundaryAndDerivedValue) {
  EXPECT_DOUBLE_EQ(weighted_sinr(2.0, 1.0, 1.0, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(weighted_sinr(2.0, 1.0, 0.0, 1.0), 1.0);
  // PrLoS(50 m, 1.5 m) = 0.6494; 0.9568 is the center-of-disk existence value.
  EXPECT_NEAR(weighted_sinr(2.0, 1.0, 0.6494, 0.9568), 1.6343, 5e-4);
  EXPECT_THROW(weighted_sinr(1.0, 1.0, 1.2, 0.5), InvalidInput);
}

TEST(WeightedSinr, MonotoneInEachArgument) {
  const double base = weighted_sinr(2.0, 1.5, 0.4, 0.7);
  EXPECT_GE(weighted_sinr(2.5, 1.5, 0.4, 0.7), base);
  EXPECT_GE(weighted_sinr(2.0, 2.0, 0.4, 0.7), base);
  EXPECT_GE(weighted_sinr(2.0, 1.5, 0.4, 0.9), base);
  // Monotone in PrLoS at gamma_I = 0.
  EXPECT_GE(weighted_sinr(2.0, 0.0, 0.6, 0.7), weighted_sinr(2.0, 0.0, 0.4, 0.7));
}
