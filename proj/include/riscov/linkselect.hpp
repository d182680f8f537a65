#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "riscov/channel.hpp"
#include "riscov/errors.hpp"
#include "riscov/matrix.hpp"
#include "riscov/phasectl.hpp"

namespace riscov {

/// Linear SINR components of one user in one realization. total is the
/// dual-hop lower-bound SINR gamma = gamma_D + gamma_I.
struct SinrBreakdown {
  double direct = 0.0;
  double reflective = 0.0;
  double total = 0.0;
  std::vector<std::size_t> selected_ris;
  double noise_power = 0.0;
  double interference_power = 0.0;
};

/// Mean per-entry power of a fading matrix; reduces to |h|^2 for scalars.
inline double mean_entry_power(const CMat& m) {
  if (m.empty()) return 0.0;
  const double f = m.frobenius_norm();
  return f * f / static_cast<double>(m.rows() * m.cols());
}

/// Direct-link SINR. h_d carries normalized fading; path loss and element
/// gains enter through the explicit mean-power factor, the array gains
/// through the aligned main lobes.
inline double sinr_direct(const CMat& h_d, const SystemConfig& cfg, double r_sd,
                          double interference_w) {
  const double omega = pathloss_bs_ue(r_sd, cfg);
  const double gains = cfg.tx_pattern.main_lobe_gain * cfg.rx_pattern.main_lobe_gain;
  return mean_entry_power(h_d) * gains * cfg.tx_power_w * omega /
         (cfg.noise_w + interference_w);
}

/// One surface of a reflective selection.
struct RisCandidate {
  CMat h;              // L x N_b fading, normalized
  CMat g;              // L x N_u fading, normalized
  double dist_bs_ris = 0.0;
  double dist_ris_ue = 0.0;
  std::size_t id = 0;  // index within the deployment
};

/// Reflective SINR over the selected surfaces: per surface the cascade
/// power is scaled by the product of the two hop path losses; surfaces add
/// power-wise.
inline double sinr_reflective(const std::vector<RisCandidate>& selected,
                              const PhasePlan& plan, const SystemConfig& cfg,
                              double interference_w) {
  if (plan.thetas.size() < selected.size())
    throw InvalidInput("sinr_reflective: plan does not cover the selection");
  const double gains = cfg.tx_pattern.main_lobe_gain * cfg.rx_pattern.main_lobe_gain;
  double acc = 0.0;
  for (std::size_t n = 0; n < selected.size(); ++n) {
    const RisCandidate& c = selected[n];
    const E2eChannel e = e2e_channel({c.h}, {c.g}, PhasePlan{{plan.thetas[n]}, plan.scheme});
    const double omega = pathloss_bs_ris(c.dist_bs_ris, cfg) *
                         pathloss_ris_ue(c.dist_ris_ue, cfg);
    acc += mean_entry_power(e.matrix) * omega;
  }
  return acc * gains * cfg.tx_power_w / (cfg.noise_w + interference_w);
}

struct SelectionResult {
  std::vector<std::size_t> picked;  // positions within the candidate list
  PhasePlan plan;                   // per picked surface, in order
  SinrBreakdown sinr;
};

/// Best single surface by end-to-end SINR with per-candidate optimal
/// phases; ties broken by smaller distance product, then smaller id. An
/// empty candidate list degrades to the direct-only breakdown.
inline SelectionResult select_best_ris(const std::vector<RisCandidate>& candidates,
                                       const CMat& h_d, double r_sd,
                                       const SystemConfig& cfg, double interference_w) {
  SelectionResult out;
  const double gd = sinr_direct(h_d, cfg, r_sd, interference_w);
  out.sinr.direct = gd;
  out.sinr.noise_power = cfg.noise_w;
  out.sinr.interference_power = interference_w;
  double best_total = -1.0;
  double best_product = std::numeric_limits<double>::infinity();
  std::size_t best_pos = 0;
  PhasePlan best_plan;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const RisCandidate& c = candidates[i];
    PhasePlan plan = optimal_phases(c.h, c.g);
    const double gi = sinr_reflective({c}, plan, cfg, interference_w);
    const double total = gi + gd;
    const double product = c.dist_bs_ris * c.dist_ris_ue;
    const bool better =
        total > best_total ||
        (total == best_total &&
         (product < best_product ||
          (product == best_product && c.id < candidates[best_pos].id)));
    if (better) {
      best_total = total;
      best_product = product;
      best_pos = i;
      best_plan = std::move(plan);
    }
  }
  if (best_total >= 0.0 && !candidates.empty()) {
    out.picked = {best_pos};
    out.plan = std::move(best_plan);
    out.sinr.reflective = best_total - gd;
    out.sinr.selected_ris = {candidates[best_pos].id};
  }
  out.sinr.total = out.sinr.direct + out.sinr.reflective;
  return out;
}

enum class SubsetMode { Auto, Exhaustive, Greedy };

namespace detail {

inline double binomial_count(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 0; i < k; ++i)
    c *= static_cast<double>(n - i) / static_cast<double>(i + 1);
  return c;
}

inline double joint_reflective_sinr(const std::vector<RisCandidate>& candidates,
                                    const std::vector<std::size_t>& subset,
                                    const SystemConfig& cfg, double interference_w,
                                    PhasePlan* plan_out) {
  std::vector<CMat> hs, gs;
  std::vector<RisCandidate> sel;
  for (std::size_t idx : subset) {
    hs.push_back(candidates[idx].h);
    gs.push_back(candidates[idx].g);
    sel.push_back(candidates[idx]);
  }
  PhasePlan plan = optimal_phases_multi(hs, gs);
  const double gi = sinr_reflective(sel, plan, cfg, interference_w);
  if (plan_out) *plan_out = std::move(plan);
  return gi;
}

}  // namespace detail

/// K-subset association. Exhaustive mode enumerates all C(N, K) subsets
/// with joint phase re-optimization per subset; greedy adds one surface at
/// a time by marginal gain and is the default once C(N, K) > 1e4.
inline SelectionResult select_ris_subset(const std::vector<RisCandidate>& candidates,
                                         std::size_t k, const CMat& h_d, double r_sd,
                                         const SystemConfig& cfg, double interference_w,
                                         SubsetMode mode = SubsetMode::Auto) {
  const std::size_t n = candidates.size();
  if (k < 1 || k > n) throw InvalidInput("select_ris_subset: need 1 <= K <= N");
  if (k == 1) return select_best_ris(candidates, h_d, r_sd, cfg, interference_w);

  SelectionResult out;
  out.sinr.direct = sinr_direct(h_d, cfg, r_sd, interference_w);
  out.sinr.noise_power = cfg.noise_w;
  out.sinr.interference_power = interference_w;

  if (mode == SubsetMode::Auto)
    mode = detail::binomial_count(n, k) <= 1e4 ? SubsetMode::Exhaustive : SubsetMode::Greedy;

  std::vector<std::size_t> best;
  PhasePlan best_plan;
  double best_gi = -1.0;
  if (mode == SubsetMode::Exhaustive) {
    std::vector<std::size_t> subset(k);
    for (std::size_t i = 0; i < k; ++i) subset[i] = i;
    auto next_combination = [&]() {
      std::size_t i = k;
      while (i-- > 0) {
        if (subset[i] != i + n - k) {
          ++subset[i];
          for (std::size_t j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
          return true;
        }
      }
      return false;
    };
    do {
      PhasePlan plan;
      const double gi = detail::joint_reflective_sinr(candidates, subset, cfg,
                                                      interference_w, &plan);
      if (gi > best_gi) {
        best_gi = gi;
        best = subset;
        best_plan = std::move(plan);
      }
    } while (next_combination());
  } else {
    std::vector<std::size_t> chosen;
    std::vector<bool> used(n, false);
    for (std::size_t round = 0; round < k; ++round) {
      double round_best = -1.0;
      std::size_t round_pick = n;
      PhasePlan round_plan;
      for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        auto trial = chosen;
        trial.push_back(i);
        PhasePlan plan;
        const double gi = detail::joint_reflective_sinr(candidates, trial, cfg,
                                                        interference_w, &plan);
        if (gi > round_best) {
          round_best = gi;
          round_pick = i;
          round_plan = std::move(plan);
        }
      }
      used[round_pick] = true;
      chosen.push_back(round_pick);
      best_gi = round_best;
      best_plan = std::move(round_plan);
    }
    best = std::move(chosen);
  }

  out.picked = best;
  out.plan = std::move(best_plan);
  out.sinr.reflective = std::max(0.0, best_gi);
  for (std::size_t idx : best) out.sinr.selected_ris.push_back(candidates[idx].id);
  out.sinr.total = out.sinr.direct + out.sinr.reflective;
  return out;
}

/// Association-weighted SINR: gamma_new = PrLoS * gamma_D +
/// (1 - PrLoS) * P_R^s * gamma_I.
inline double weighted_sinr(double gamma_d, double gamma_i, double pr_los, double pr_s) {
  if (pr_los < 0.0 || pr_los > 1.0 || pr_s < 0.0 || pr_s > 1.0)
    throw InvalidInput("weighted_sinr: probabilities must lie in [0, 1]");
  return pr_los * gamma_d + (1.0 - pr_los) * pr_s * gamma_i;
}

}  // namespace riscov
