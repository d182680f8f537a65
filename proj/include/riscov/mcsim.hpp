#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "riscov/analytics.hpp"
#include "riscov/channel.hpp"
#include "riscov/errors.hpp"
#include "riscov/geometry.hpp"
#include "riscov/linkselect.hpp"
#include "riscov/phasectl.hpp"
#include "riscov/rng.hpp"

namespace riscov {

enum class DeploymentModel { Ppp, Pcp, FixedCount };

/// Full matrix channels drive the phase-control algebra; the scalar model
/// is the sectored-gain statistical reduction the closed forms describe
/// (arrays enter through the directivity gains only).
enum class ChannelModel { Scalar, Matrix };

/// weighted_sinr thresholds the association-weighted SINR; the mixture
/// estimator averages the branch indicators with the analytical weights and
/// estimates the same composition the closed-form ergodic coverage integrates.
enum class CoverageEstimator { WeightedSinr, AssociationMixture };

enum class AssociationRule { MaxSinr, MinProduct };

/// per_surface adds the selected surfaces power-wise with their own hop
/// path losses (the reflective-SINR form); coherent combines the
/// path-weighted composite channel the MRT beamformer acts on, so the
/// joint phase design and the metric agree.
enum class ReflectiveCombining { PerSurface, Coherent };

/// all_users evaluates every user of each trial; ergodic_tu draws one
/// tagged user per trial (the remaining users interfere); fixed_distance
/// pins the tagged user at a given range.
enum class TuMode { AllUsers, ErgodicTu, FixedDistance };

struct SchemeSpec {
  PhaseScheme kind = PhaseScheme::Optimal;
  int bits = 4;
  SuboptimalOptions qb{16, 1e-3, 48};

  static SchemeSpec parse(const std::string& name);
  std::string name() const;
};

inline SchemeSpec SchemeSpec::parse(const std::string& name) {
  SchemeSpec s;
  if (name == "optimal") {
    s.kind = PhaseScheme::Optimal;
  } else if (name == "suboptimal") {
    s.kind = PhaseScheme::Suboptimal;
  } else if (name.rfind("quantized", 0) == 0) {
    s.kind = PhaseScheme::Quantized;
    const auto colon = name.find(':');
    if (colon != std::string::npos) {
      const int b = std::stoi(name.substr(colon + 1));
      if (b < 1) throw InvalidInput("scheme: quantization bits must be >= 1");
      s.bits = b;
    }
  } else if (name == "random") {
    s.kind = PhaseScheme::Random;
  } else if (name == "era") {
    s.kind = PhaseScheme::Era;
  } else {
    throw InvalidInput("scheme: unknown name '" + name + "'");
  }
  return s;
}

inline std::string SchemeSpec::name() const {
  switch (kind) {
    case PhaseScheme::Optimal: return "optimal";
    case PhaseScheme::Suboptimal: return "suboptimal";
    case PhaseScheme::Quantized: return "quantized:" + std::to_string(bits);
    case PhaseScheme::Random: return "random";
    case PhaseScheme::Era: return "era";
  }
  return "optimal";
}

struct ExperimentConfig {
  SystemConfig system;
  double ris_density = 6e-4;
  DeploymentModel deployment_model = DeploymentModel::Ppp;
  PcpParams pcp{0.0, 3.0, 0.0};  // zeros resolved against density / radius
  std::size_t fixed_count = 0;   // 0 = round(lambda pi R^2)
  SchemeSpec scheme;
  std::size_t k_select = 1;      // 0 = all LoS surfaces (the exhaustive scheme)
  std::vector<double> thresholds_db = {-10, -5, 0, 5, 10, 15, 20, 25, 30};
  std::size_t n_trials = 1000;
  std::uint64_t base_seed = 1;
  bool with_interference = true;
  ChannelModel channel_model = ChannelModel::Scalar;
  CoverageEstimator estimator = CoverageEstimator::WeightedSinr;
  AssociationRule association = AssociationRule::MaxSinr;
  ReflectiveCombining combining = ReflectiveCombining::PerSurface;
  TuMode tu_mode = TuMode::AllUsers;
  double tu_distance_m = 40.0;
  double rate_cap_db = -3.0;
  std::size_t n_threads = 1;

  void validate() const {
    if (n_trials < 1) throw InvalidInput("ExperimentConfig: n_trials must be >= 1");
    if (ris_density < 0.0) throw InvalidInput("ExperimentConfig: ris_density must be >= 0");
    for (double t : thresholds_db)
      if (!std::isfinite(t)) throw InvalidInput("ExperimentConfig: thresholds must be finite");
    if (tu_mode == TuMode::FixedDistance &&
        (tu_distance_m < 0.0 || tu_distance_m > system.cell_radius_m))
      throw InvalidInput("ExperimentConfig: tu_distance outside the cell");
  }
};

/// Per-user outcome of one trial.
struct TrialUserResult {
  SinrBreakdown sinr;
  double gamma_new = 0.0;
  double pr_los = 0.0;
  double pr_s = 0.0;   // reflective-link existence probability at xi
  double xi = 0.0;
  bool reflective_exists = false;
};

namespace detail {

// P_R^s(xi) lookup shared across trials (quadrature is too slow per user).
class ReflectiveProbTable {
 public:
  ReflectiveProbTable(const SystemConfig& cfg, double lambda_r) {
    AnalyticsParams ap;
    ap.lambda_r = lambda_r;
    ap.quad_tol = 1e-7;
    const Analytics an(cfg, ap);
    const double R = cfg.cell_radius_m;
    values_.resize(kPoints);
    for (std::size_t i = 0; i < kPoints; ++i)
      values_[i] = an.prob_reflective(R * static_cast<double>(i) / (kPoints - 1));
    radius_ = R;
  }

  double operator()(double xi) const {
    const double u = std::clamp(xi / radius_, 0.0, 1.0) * (kPoints - 1);
    const auto i = std::min(static_cast<std::size_t>(u), kPoints - 2);
    const double f = u - static_cast<double>(i);
    return values_[i] + f * (values_[i + 1] - values_[i]);
  }

 private:
  static constexpr std::size_t kPoints = 65;
  std::vector<double> values_;
  double radius_ = 0.0;
};

struct TrialContext {
  const ExperimentConfig& cfg;
  const ReflectiveProbTable& prs;
};

inline std::vector<Point2D> sample_ris_points(const ExperimentConfig& cfg, RngStream& rng) {
  const double R = cfg.system.cell_radius_m;
  switch (cfg.deployment_model) {
    case DeploymentModel::Ppp:
      return sample_ppp_disk(cfg.ris_density, R, rng);
    case DeploymentModel::Pcp: {
      PcpParams p = cfg.pcp;
      if (p.mean_per_cluster <= 0.0) p.mean_per_cluster = 3.0;
      if (p.parent_density <= 0.0) p.parent_density = cfg.ris_density / p.mean_per_cluster;
      if (p.scatter_std <= 0.0) p.scatter_std = 0.25 * R;
      return sample_pcp_disk(p, R, rng);
    }
    case DeploymentModel::FixedCount: {
      std::size_t n = cfg.fixed_count;
      if (n == 0)
        n = static_cast<std::size_t>(std::llround(cfg.ris_density * std::numbers::pi * R * R));
      return sample_fixed_disk(n, R, rng);
    }
  }
  return {};
}

// Scalar-model argmax: per-candidate optimal phases reduce to co-phasing,
// so the per-surface reflective SINR has the closed form (sum |h||g|)^2
// times the two-hop path loss.
inline double scalar_cophased_power(const CMat& h, const CMat& g) {
  double s = 0.0;
  for (std::size_t l = 0; l < h.rows(); ++l) s += std::abs(h(l, 0)) * std::abs(g(l, 0));
  return s * s;
}

}  // namespace detail

/// One full realization: deployment, LoS thinning, channel draws, phase
/// plan per the configured scheme, association, SINR composition. Fully
/// determined by (base_seed, trial_index).
inline std::vector<TrialUserResult> run_trial_ctx(const detail::TrialContext& ctx,
                                                  std::size_t trial_index) {
  const ExperimentConfig& cfg = ctx.cfg;
  const SystemConfig& sys = cfg.system;
  const double R = sys.cell_radius_m;
  RngStream root(cfg.base_seed, trial_index);

  RngStream dep_rng = root.substream(1);
  const std::vector<Point2D> ris = detail::sample_ris_points(cfg, dep_rng);

  std::vector<Point2D> users;
  const std::size_t n_tagged = (cfg.tu_mode == TuMode::AllUsers) ? sys.n_users : 1;
  users.reserve(sys.n_users);
  if (cfg.tu_mode == TuMode::FixedDistance)
    users.push_back({cfg.tu_distance_m, 0.0});
  else
    users.push_back(sample_uniform_disk(R, dep_rng));
  for (std::size_t u = 1; u < sys.n_users; ++u) users.push_back(sample_uniform_disk(R, dep_rng));

  Deployment dep;
  dep.cell_radius = R;
  dep.ris_points = ris;
  dep.user_points = users;

  const std::size_t nb = (cfg.channel_model == ChannelModel::Matrix) ? sys.n_bs_antennas : 1;
  const std::size_t nu = (cfg.channel_model == ChannelModel::Matrix) ? sys.n_ue_antennas : 1;
  const FadingLink los_link{sys.nakagami_m_los, 1.0, 0.0};

  std::vector<TrialUserResult> results(n_tagged);
  for (std::size_t u = 0; u < n_tagged; ++u) {
    RngStream user_rng = root.substream(1000 + u);
    RngStream mark_rng = user_rng.substream(1);
    RngStream chan_rng = user_rng.substream(2);
    RngStream intf_rng = user_rng.substream(3);
    RngStream scheme_rng = user_rng.substream(4);

    TrialUserResult& out = results[u];
    const Point2D tu = users[u];
    out.xi = std::max(std::hypot(tu.x, tu.y), sys.reference_distance_m);
    out.pr_los = los_probability(out.xi, sys.h_ut_m);
    out.pr_s = ctx.prs(out.xi);

    const auto marks = thin_los(ris, tu, sys.h_ut_m, mark_rng);
    if (u == 0) dep.los_marks = marks;

    // Candidate channels for every LoS surface.
    std::vector<RisCandidate> cands;
    for (std::size_t i = 0; i < ris.size(); ++i) {
      if (!marks[i]) continue;
      RisCandidate c;
      c.id = i;
      c.dist_bs_ris = std::max(std::hypot(ris[i].x, ris[i].y), sys.reference_distance_m);
      c.dist_ris_ue = std::max(distance(ris[i], tu), sys.reference_distance_m);
      c.h = sample_channel_matrix(sys.ris_elements, nb, los_link, chan_rng);
      c.g = sample_channel_matrix(sys.ris_elements, nu, los_link, chan_rng);
      cands.push_back(std::move(c));
    }
    out.reflective_exists = !cands.empty();

    // Association: pick the serving subset before the scheme applies, so
    // scheme comparisons under common random numbers share the selection.
    std::size_t k = (cfg.k_select == 0 || cfg.scheme.kind == PhaseScheme::Era)
                        ? cands.size()
                        : std::min(cfg.k_select, cands.size());
    std::vector<std::size_t> picked;
    if (!cands.empty() && k > 0) {
      std::vector<std::size_t> order(cands.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      if (cfg.association == AssociationRule::MaxSinr &&
          cfg.channel_model == ChannelModel::Scalar) {
        std::vector<double> score(cands.size());
        for (std::size_t i = 0; i < cands.size(); ++i) {
          const auto& c = cands[i];
          score[i] = detail::scalar_cophased_power(c.h, c.g) *
                     pathloss_bs_ris(c.dist_bs_ris, sys) *
                     pathloss_ris_ue(c.dist_ris_ue, sys);
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
      } else {
        // Distance-inspired ranking by the two-hop path-length product.
        std::vector<double> prod(cands.size());
        for (std::size_t i = 0; i < cands.size(); ++i)
          prod[i] = cands[i].dist_bs_ris * cands[i].dist_ris_ue;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return prod[a] < prod[b]; });
      }
      picked.assign(order.begin(), order.begin() + k);
    }

    const double interference =
        cfg.with_interference
            ? [&] {
                std::vector<std::size_t> sel_ids;
                for (std::size_t p : picked) sel_ids.push_back(cands[p].id);
                return sample_interference(sys, dep, u < users.size() ? u : 0, sel_ids,
                                           intf_rng);
              }()
            : 0.0;

    const CMat h_d = sample_channel_matrix(nu, nb, los_link, chan_rng);
    out.sinr.direct = sinr_direct(h_d, sys, out.xi, interference);
    out.sinr.noise_power = sys.noise_w;
    out.sinr.interference_power = interference;

    if (!picked.empty()) {
      // Phase design operates on the path-weighted physical channels; per-
      // surface scaling is immaterial for K = 1 and for scalar co-phasing.
      std::vector<CMat> hs_w, gs_w;
      std::vector<RisCandidate> sel;
      std::vector<std::size_t> lens;
      for (std::size_t p : picked) {
        const RisCandidate& c = cands[p];
        CMat hw = c.h;
        hw *= std::complex<double>{std::sqrt(pathloss_bs_ris(c.dist_bs_ris, sys)), 0.0};
        CMat gw = c.g;
        gw *= std::complex<double>{std::sqrt(pathloss_ris_ue(c.dist_ris_ue, sys)), 0.0};
        hs_w.push_back(std::move(hw));
        gs_w.push_back(std::move(gw));
        sel.push_back(c);
        lens.push_back(c.h.rows());
        out.sinr.selected_ris.push_back(c.id);
      }
      PhasePlan plan;
      switch (cfg.scheme.kind) {
        case PhaseScheme::Optimal:
        case PhaseScheme::Era:
          plan = optimal_phases_multi(hs_w, gs_w);
          break;
        case PhaseScheme::Suboptimal:
          plan = suboptimal_phases(hs_w, gs_w, cfg.scheme.qb, scheme_rng);
          break;
        case PhaseScheme::Quantized: {
          // Benchmark discrete control: per-surface designs snapped to the
          // phase grid (no cross-surface coordination).
          plan.scheme = PhaseScheme::Quantized;
          plan.quantization_bits = cfg.scheme.bits;
          for (std::size_t i = 0; i < hs_w.size(); ++i) {
            PhasePlan single = quantize_phases(optimal_phases(hs_w[i], gs_w[i]),
                                               cfg.scheme.bits);
            plan.thetas.push_back(std::move(single.thetas[0]));
          }
          break;
        }
        case PhaseScheme::Random:
          plan = random_phases(lens, scheme_rng);
          break;
      }
      if (cfg.combining == ReflectiveCombining::Coherent) {
        const E2eChannel composite = e2e_channel(hs_w, gs_w, plan);
        const double gains =
            sys.tx_pattern.main_lobe_gain * sys.rx_pattern.main_lobe_gain;
        out.sinr.reflective = mean_entry_power(composite.matrix) * gains *
                              sys.tx_power_w / (sys.noise_w + interference);
      } else {
        out.sinr.reflective = sinr_reflective(sel, plan, sys, interference);
      }
    }
    out.sinr.total = out.sinr.direct + out.sinr.reflective;
    out.gamma_new = weighted_sinr(out.sinr.direct, out.sinr.reflective,
                                  out.pr_los, std::clamp(out.pr_s, 0.0, 1.0));
  }
  return results;
}

/// Runs all trials, parallelized over trial indices; results are keyed by
/// trial index so the output is identical for any thread count.
inline std::vector<std::vector<TrialUserResult>> run_trials(const ExperimentConfig& cfg) {
  cfg.validate();
  detail::ReflectiveProbTable prs(cfg.system, cfg.ris_density);
  detail::TrialContext ctx{cfg, prs};
  std::vector<std::vector<TrialUserResult>> all(cfg.n_trials);
  const std::size_t workers = std::max<std::size_t>(1, cfg.n_threads);
  if (workers == 1) {
    for (std::size_t t = 0; t < cfg.n_trials; ++t) all[t] = run_trial_ctx(ctx, t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t t = next.fetch_add(1);
          if (t >= cfg.n_trials) return;
          all[t] = run_trial_ctx(ctx, t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return all;
}

/// Single-trial entry point (testing and scenario replay).
inline std::vector<TrialUserResult> run_trial(const ExperimentConfig& cfg,
                                              std::size_t trial_index) {
  cfg.validate();
  detail::ReflectiveProbTable prs(cfg.system, cfg.ris_density);
  detail::TrialContext ctx{cfg, prs};
  return run_trial_ctx(ctx, trial_index);
}

struct CoverageCurve {
  std::vector<double> threshold_db;
  std::vector<double> coverage;
  std::vector<double> ci_halfwidth;  // 95% normal approximation

  /// Monotone non-increasing in the threshold up to CI noise.
  bool monotone_within_ci(double slack_factor = 2.0) const {
    for (std::size_t i = 0; i + 1 < coverage.size(); ++i) {
      const double slack =
          slack_factor * (ci_halfwidth[i] + ci_halfwidth[i + 1]) + 1e-12;
      if (coverage[i + 1] > coverage[i] + slack) return false;
    }
    return true;
  }
};

struct RateSummary {
  std::vector<double> per_user_rate;  // bits/s, ergodic mean per tagged user
  double sum_rate = 0.0;
  double cap_db = 0.0;
};

namespace detail {

inline double coverage_sample(const TrialUserResult& r, double t_linear,
                              CoverageEstimator est) {
  if (est == CoverageEstimator::WeightedSinr)
    return r.gamma_new > t_linear ? 1.0 : 0.0;
  const double direct = r.sinr.direct > t_linear ? 1.0 : 0.0;
  const double refl = r.sinr.reflective > t_linear ? 1.0 : 0.0;
  return r.pr_los * direct + (1.0 - r.pr_los) * std::clamp(r.pr_s, 0.0, 1.0) * refl;
}

inline double rate_sample(const TrialUserResult& r, double cap_linear, double bw,
                          CoverageEstimator est) {
  auto rate_of = [&](double g) { return bw * std::log2(1.0 + std::min(g, cap_linear)); };
  if (est == CoverageEstimator::WeightedSinr) return rate_of(r.gamma_new);
  return r.pr_los * rate_of(r.sinr.direct) +
         (1.0 - r.pr_los) * std::clamp(r.pr_s, 0.0, 1.0) * rate_of(r.sinr.reflective);
}

}  // namespace detail

inline CoverageCurve coverage_curve_from(const std::vector<std::vector<TrialUserResult>>& all,
                                         const ExperimentConfig& cfg) {
  CoverageCurve curve;
  curve.threshold_db = cfg.thresholds_db;
  for (double tdb : cfg.thresholds_db) {
    const double t = db_to_linear(tdb);
    double s = 0.0, s2 = 0.0, n = 0.0;
    for (const auto& trial : all)
      for (const auto& r : trial) {
        const double v = detail::coverage_sample(r, t, cfg.estimator);
        s += v;
        s2 += v * v;
        n += 1.0;
      }
    const double mean = s / n;
    const double var = std::max(0.0, s2 / n - mean * mean);
    curve.coverage.push_back(mean);
    curve.ci_halfwidth.push_back(1.96 * std::sqrt(var / n));
  }
  return curve;
}

inline CoverageCurve coverage_curve(const ExperimentConfig& cfg) {
  return coverage_curve_from(run_trials(cfg), cfg);
}

inline RateSummary rate_summary_from(const std::vector<std::vector<TrialUserResult>>& all,
                                     const ExperimentConfig& cfg) {
  RateSummary out;
  out.cap_db = cfg.rate_cap_db;
  const double cap = db_to_linear(cfg.rate_cap_db);
  std::size_t n_tagged = 0;
  for (const auto& trial : all) n_tagged = std::max(n_tagged, trial.size());
  out.per_user_rate.assign(n_tagged, 0.0);
  std::vector<double> counts(n_tagged, 0.0);
  for (const auto& trial : all)
    for (std::size_t u = 0; u < trial.size(); ++u) {
      out.per_user_rate[u] +=
          detail::rate_sample(trial[u], cap, cfg.system.bandwidth_hz, cfg.estimator);
      counts[u] += 1.0;
    }
  for (std::size_t u = 0; u < n_tagged; ++u)
    if (counts[u] > 0.0) out.per_user_rate[u] /= counts[u];
  for (double r : out.per_user_rate) out.sum_rate += r;
  return out;
}

inline RateSummary rate_summary(const ExperimentConfig& cfg) {
  return rate_summary_from(run_trials(cfg), cfg);
}

struct SchemeComparison {
  std::string scheme;
  CoverageCurve coverage;
  RateSummary rate;
  std::vector<double> per_trial_rate;  // tagged-user mean per trial (paired tests)
};

/// Runs the same seeded trials under each scheme (common random numbers:
/// deployment, fading, and interference draws are identical across schemes).
inline std::vector<SchemeComparison> compare_schemes(const ExperimentConfig& base,
                                                     const std::vector<std::string>& schemes) {
  if (schemes.size() < 2) throw InvalidInput("compare_schemes: need at least two schemes");
  std::vector<SchemeComparison> out;
  for (const std::string& name : schemes) {
    ExperimentConfig cfg = base;
    cfg.scheme = SchemeSpec::parse(name);
    const auto all = run_trials(cfg);
    SchemeComparison cmp;
    cmp.scheme = name;
    cmp.coverage = coverage_curve_from(all, cfg);
    cmp.rate = rate_summary_from(all, cfg);
    const double cap = db_to_linear(cfg.rate_cap_db);
    for (const auto& trial : all) {
      double s = 0.0;
      for (const auto& r : trial)
        s += detail::rate_sample(r, cap, cfg.system.bandwidth_hz, cfg.estimator);
      cmp.per_trial_rate.push_back(trial.empty() ? 0.0 : s / static_cast<double>(trial.size()));
    }
    out.push_back(std::move(cmp));
  }
  return out;
}

}  // namespace riscov
