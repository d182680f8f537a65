#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "riscov/channel.hpp"
#include "riscov/errors.hpp"
#include "riscov/geometry.hpp"
#include "riscov/quadrature.hpp"
#include "riscov/special_functions.hpp"

namespace riscov {

/// Gamma moment-match of the co-phased cascade sum R = sum_l |h_l||g_l|:
/// R ~ Gamma(L * alpha_u, beta_u) with the per-element moments taken from
/// the Nakagami product law.
struct CascadeGammaParams {
  double alpha_u = 0.0;   // per-element shape
  double beta_u = 0.0;    // rate
  std::size_t elements = 0;
  double mu1 = 0.0;       // E[U]
  double mu2 = 0.0;       // E[U^2]
  double eta_bar = 0.0;

  double shape() const { return static_cast<double>(elements) * alpha_u; }
  double mean() const { return shape() / beta_u; }
  double cdf(double z) const { return gamma_cdf(z, shape(), beta_u); }
  double pdf(double z) const { return gamma_pdf(z, shape(), beta_u); }
};

inline CascadeGammaParams cascade_gamma_approx(double m_h, double omega_h, double m_g,
                                               double omega_g, double elem_gain,
                                               std::size_t elements) {
  if (!(m_h > 0.0) || !(omega_h > 0.0) || !(m_g > 0.0) || !(omega_g > 0.0) ||
      !(elem_gain > 0.0) || elements < 1)
    throw InvalidInput("cascade_gamma_approx: parameters must be positive");
  CascadeGammaParams out;
  out.elements = elements;
  out.eta_bar = std::sqrt((1.0 / (elem_gain * elem_gain)) * (m_h / omega_h) * (m_g / omega_g));
  const double lg_denom = lgamma_fn(m_h) + lgamma_fn(m_g);
  auto moment = [&](double m) {
    return std::pow(out.eta_bar, -m) *
           std::exp(lgamma_fn(m_h + 0.5 * m) + lgamma_fn(m_g + 0.5 * m) - lg_denom);
  };
  out.mu1 = moment(1.0);
  out.mu2 = moment(2.0);
  const double var = out.mu2 - out.mu1 * out.mu1;
  if (!(var > 0.0))
    throw NumericFailure("cascade_gamma_approx: degenerate variance");
  out.alpha_u = out.mu1 * out.mu1 / var;
  out.beta_u = out.mu1 / var;
  return out;
}

/// Inputs of the closed-form coverage/rate evaluation. Zeroed fields fall
/// back to the system config at construction: c_l/c_n to zeta, m_h/m_g to
/// the LoS Nakagami shape, support_radius to the cell radius.
struct AnalyticsParams {
  double lambda_r = 6e-4;
  std::function<double(double)> user_density;   // lambda_u(xi); empty = constant
  double alpha_l = 2.0;     // LoS path-loss exponent of the distance mapping
  double alpha_n = 4.0;     // NLoS path-loss exponent
  double c_l = 0.0;         // LoS intercept; 0 = zeta
  double c_n = 0.0;         // NLoS intercept; 0 = zeta
  double quad_tol = 1e-6;
  double support_radius = 0.0;                  // support of the distance laws
  std::function<double(double)> los_override;   // empty = 3GPP model at h_ut
  double m_h = 0.0;         // BS-RIS Nakagami shape; 0 = m_los
  double m_g = 0.0;         // RIS-UE Nakagami shape; 0 = m_los
};

/// Numerical evaluator for the stochastic-geometry expressions: nearest
/// LoS-surface distance law, association probabilities, the reflective-link
/// existence probability, conditional and ergodic coverage, and rate.
class Analytics {
 public:
  Analytics(const SystemConfig& cfg, AnalyticsParams params)
      : cfg_(cfg), p_(std::move(params)) {
    if (!(p_.lambda_r >= 0.0)) throw InvalidInput("Analytics: lambda_r must be >= 0");
    if (!(p_.quad_tol > 0.0)) throw InvalidInput("Analytics: quad_tol must be positive");
    if (p_.alpha_l < 2.0 || p_.alpha_n < 2.0)
      throw InvalidInput("Analytics: path-loss exponents must be >= 2");
    if (p_.support_radius <= 0.0) p_.support_radius = cfg_.cell_radius_m;
    if (p_.c_l <= 0.0) p_.c_l = cfg_.zeta;
    if (p_.c_n <= 0.0) p_.c_n = cfg_.zeta;
    if (p_.m_h <= 0.0) p_.m_h = cfg_.nakagami_m_los;
    if (p_.m_g <= 0.0) p_.m_g = cfg_.nakagami_m_los;
    cascade_ = cascade_gamma_approx(p_.m_h, 1.0, p_.m_g, 1.0, 1.0, cfg_.ris_elements);

    const double span = std::max(p_.support_radius, psi_l(p_.support_radius)) + 1.0;
    cum_r_prlos_.emplace([this](double r) { return r * prlos(r); }, 0.0, span);
    cum_nlos_.emplace([this](double t) { return (1.0 - prlos(t)) * t; }, 0.0, span);
    b_l_ = 1.0 - std::exp(-2.0 * std::numbers::pi * p_.lambda_r *
                          (*cum_r_prlos_)(p_.support_radius));
    if (p_.lambda_r > 0.0 && b_l_ > 0.0) {
      a_l_ = b_l_ * integrate(
                        [this](double x) {
                          return nlos_void_factor(x) * nearest_los_pdf_unsafe(x);
                        },
                        0.0, p_.support_radius, p_.quad_tol);
    }
  }

  double prlos(double d) const {
    return p_.los_override ? p_.los_override(d) : los_probability(d, cfg_.h_ut_m);
  }

  const CascadeGammaParams& cascade() const { return cascade_; }
  const AnalyticsParams& params() const { return p_; }

  /// NLoS-to-LoS distance mapping psi_L(x) = (C_N/C_L)^{1/alpha_N} x^{alpha_L/alpha_N}.
  double psi_l(double x) const {
    return std::pow(p_.c_n / p_.c_l, 1.0 / p_.alpha_n) *
           std::pow(x, p_.alpha_l / p_.alpha_n);
  }

  /// Conditional PDF of the distance to the nearest LoS surface, normalized
  /// over the finite support (the 3GPP tail makes the infinite-plane
  /// normalizer degenerate, so B_L is the at-least-one probability over the
  /// support and the density integrates to one on it).
  double nearest_los_pdf(double x) const {
    if (!(x >= 0.0)) throw InvalidInput("nearest_los_pdf: x must be non-negative");
    if (b_l_ <= 0.0) throw NumericFailure("nearest_los_pdf: undefined density (B_L = 0)");
    if (x > p_.support_radius) return 0.0;
    return nearest_los_pdf_unsafe(x);
  }

  double b_l() const { return b_l_; }

  /// CDF companion of nearest_los_pdf (void probability over the disk of
  /// radius x around the user, conditioned on at least one LoS surface).
  double nearest_los_cdf(double x) const {
    if (b_l_ <= 0.0) throw NumericFailure("nearest_los_cdf: undefined (B_L = 0)");
    if (x <= 0.0) return 0.0;
    if (x >= p_.support_radius) return 1.0;
    return (1.0 - std::exp(-2.0 * std::numbers::pi * p_.lambda_r * (*cum_r_prlos_)(x))) /
           b_l_;
  }

  /// Probability that the user associates with a LoS surface.
  double los_assoc_prob() const { return a_l_; }

  /// Serving-distance density given LoS association.
  double serving_dist_pdf(double x) const {
    if (a_l_ <= 0.0) throw NumericFailure("serving_dist_pdf: zero association probability");
    if (x > p_.support_radius) return 0.0;
    return b_l_ * nearest_los_pdf_unsafe(x) / a_l_ * nlos_void_factor(x);
  }

  double expected_serving_distance() const {
    return integrate([this](double x) { return x * serving_dist_pdf(x); }, 0.0,
                     p_.support_radius, p_.quad_tol * p_.support_radius);
  }

  /// Probability of at least one reflective LoS link for a user at
  /// distance xi from the BS, with the thinned intensity evaluated at the
  /// boundary distance of each bearing.
  double prob_reflective(double xi) const {
    if (xi < 0.0 || xi > cfg_.cell_radius_m + 1e-9)
      throw InvalidInput("prob_reflective: xi must lie in [0, R]");
    if (p_.lambda_r == 0.0) return 0.0;
    const double R = cfg_.cell_radius_m;
    const double mean_count = integrate(
        [&](double psi) {
          const double s = std::sin(psi);
          const double rdot = std::max(
              0.0, std::sqrt(std::max(0.0, R * R - xi * xi * s * s)) - xi * std::cos(psi));
          return p_.lambda_r * prlos(rdot) * 0.5 * rdot * rdot;
        },
        0.0, 2.0 * std::numbers::pi, p_.quad_tol);
    return 1.0 - std::exp(-mean_count);
  }

  /// (direct, reflective) association probabilities at distance xi.
  std::pair<double, double> assoc_probs(double xi) const {
    const double pl = prlos(xi);
    return {pl, (1.0 - pl) * prob_reflective(xi)};
  }

  /// Conditional CDF of the BS-RIS x RIS-UE path-length product, from the
  /// void probability of the thinned process over the region where the
  /// product stays below x. r_n gates the per-surface branch (pass 0 for
  /// the minimum over all surfaces).
  double cond_cdf_eta(double x, double xi, double r_n = 0.0) const {
    if (x < 0.0) throw InvalidInput("cond_cdf_eta: x must be non-negative");
    if (x <= r_n) return 0.0;
    if (x == 0.0 || p_.lambda_r == 0.0) return 0.0;
    const double R = cfg_.cell_radius_m;
    const double inner_tol = std::max(p_.quad_tol, 1e-5);
    const double lam = integrate(
        [&](double s) {
          if (s < 1e-9) return 0.0;
          double theta_max;
          if (xi < 1e-9) {
            theta_max = (s * s < x) ? std::numbers::pi : 0.0;
          } else {
            const double c = (std::pow(s, 4.0) + s * s * xi * xi - x * x) /
                             (2.0 * std::pow(s, 3.0) * xi);
            theta_max = std::acos(std::clamp(c, -1.0, 1.0));
          }
          if (theta_max <= 0.0) return 0.0;
          // Both angular half-planes contribute symmetrically.
          const double inner = integrate(
              [&](double theta) {
                const double rd = std::sqrt(std::max(
                    0.0, s * s + xi * xi - 2.0 * s * xi * std::cos(theta)));
                return prlos(rd);
              },
              0.0, theta_max, inner_tol);
          return 2.0 * p_.lambda_r * s * inner;
        },
        0.0, R, std::max(p_.quad_tol * std::max(1.0, R), 1e-4));
    return 1.0 - std::exp(-std::max(0.0, lam));
  }

  /// Conditional coverage of the direct link (noise-limited form).
  double cov_direct(double xi, double t_linear) const {
    if (!(t_linear > 0.0)) throw InvalidInput("cov_direct: threshold must be positive");
    const double omega = pathloss_bs_ue(xi, cfg_);
    const double gains = cfg_.tx_pattern.main_lobe_gain * cfg_.rx_pattern.main_lobe_gain;
    const double arg = cfg_.noise_w * t_linear / (gains * cfg_.tx_power_w * omega);
    const double m = cfg_.nakagami_m_los;
    return 1.0 - regularized_gamma_p(m, m * arg);
  }

  /// Conditional coverage of the reflective link: the path-product CDF
  /// integrated against the fitted Gamma law of the cascade amplitude,
  /// with the change of variable x = z^2 applied so the |R|^2 density is
  /// integrated with its Jacobian.
  double cov_reflective(double xi, double t_linear) const {
    if (!(t_linear > 0.0)) throw InvalidInput("cov_reflective: threshold must be positive");
    if (p_.lambda_r == 0.0) return 0.0;
    const double gains = cfg_.tx_pattern.main_lobe_gain * cfg_.rx_pattern.main_lobe_gain;
    const double gain_product = db_to_linear(cfg_.antenna_gain_bs_dbi) *
                                db_to_linear(cfg_.antenna_gain_ris_dbi) *
                                db_to_linear(cfg_.antenna_gain_ris_dbi) *
                                db_to_linear(cfg_.antenna_gain_ue_dbi);
    const double k_scale = gains * cfg_.tx_power_w * cfg_.zeta * cfg_.zeta * gain_product /
                           (cfg_.noise_w * t_linear);
    const double inv_alpha = 1.0 / cfg_.path_loss_exponent;
    // Effective support of the Gamma density of the cascade amplitude.
    const double mean = cascade_.mean();
    const double sd = std::sqrt(cascade_.shape()) / cascade_.beta_u;
    const double lo = std::max(0.0, mean - 10.0 * sd);
    const double hi = mean + 12.0 * sd;
    return integrate(
        [&](double z) {
          const double bound = std::pow(k_scale * z * z, inv_alpha);
          return cond_cdf_eta(bound, xi) * cascade_.pdf(z);
        },
        lo, hi, std::max(p_.quad_tol, 1e-5));
  }

  /// Association-weighted conditional coverage at distance xi.
  double cond_coverage(double xi, double t_linear) const {
    const auto [pr_d, pr_i] = assoc_probs(xi);
    double cov = pr_d * cov_direct(xi, t_linear);
    if (pr_i > 0.0) cov += pr_i * cov_reflective(xi, t_linear);
    return std::min(1.0, std::max(0.0, cov));
  }

  /// User-density-weighted cell average of the conditional
  /// coverage (Campbell averaging over the disk).
  double ergodic_coverage(double t_linear) const {
    const double R = cfg_.cell_radius_m;
    auto density = [this](double xi) {
      return p_.user_density ? p_.user_density(xi) : 1.0;
    };
    const double mass = integrate(
        [&](double xi) { return density(xi) * 2.0 * std::numbers::pi * xi; }, 0.0, R,
        p_.quad_tol * R * R);
    if (!(mass > 0.0)) throw InvalidInput("ergodic_coverage: zero user mass");
    // Relative accuracy ~1e-4 on the cell average; the conditional coverage
    // evaluations dominate the cost.
    const double weighted = integrate(
        [&](double xi) {
          return cond_coverage(xi, t_linear) * density(xi) * 2.0 * std::numbers::pi * xi;
        },
        0.0, R, std::max(p_.quad_tol, 1e-4) * mass);
    return weighted / mass;
  }

  /// Ergodic rate at distance xi with the min(gamma, T) cap: integral of
  /// the conditional coverage over the rate domain, zero beyond the cap.
  double ergodic_rate(double xi, double t_cap_linear) const {
    if (!(cfg_.bandwidth_hz > 0.0)) throw InvalidInput("ergodic_rate: bandwidth must be positive");
    const double cap = cfg_.bandwidth_hz * std::log2(1.0 + t_cap_linear);
    return integrate(
        [&](double t) {
          const double thr = std::exp2(t / cfg_.bandwidth_hz) - 1.0;
          if (thr <= 0.0) return 1.0;  // coverage of a vanishing threshold
          return cond_coverage(xi, thr);
        },
        0.0, cap, std::max(p_.quad_tol, 1e-4) * cap);
  }

  double sum_rate(const std::vector<double>& user_distances, double t_cap_linear) const {
    double acc = 0.0;
    for (double xi : user_distances) acc += ergodic_rate(xi, t_cap_linear);
    return acc;
  }

 private:
  double nearest_los_pdf_unsafe(double x) const {
    const double two_pi_lam = 2.0 * std::numbers::pi * p_.lambda_r;
    return two_pi_lam * x * prlos(x) * std::exp(-two_pi_lam * (*cum_r_prlos_)(x)) / b_l_;
  }

  double nlos_void_factor(double x) const {
    return std::exp(-2.0 * std::numbers::pi * p_.lambda_r * (*cum_nlos_)(psi_l(x)));
  }

  SystemConfig cfg_;
  AnalyticsParams p_;
  std::optional<CumulativeTable> cum_r_prlos_;
  std::optional<CumulativeTable> cum_nlos_;
  double b_l_ = 0.0;
  double a_l_ = 0.0;
  CascadeGammaParams cascade_;
};

}  // namespace riscov
