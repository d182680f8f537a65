#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "riscov/errors.hpp"
#include "riscov/geometry.hpp"
#include "riscov/matrix.hpp"
#include "riscov/rng.hpp"
#include "riscov/samplers.hpp"

namespace riscov {

inline constexpr double kSpeedOfLight = 3.0e8;  // m/s, free-space convention

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Sectored beam: constant main-lobe gain M over beamwidth psi, constant
/// side-lobe gain m elsewhere.
struct AntennaPattern {
  double main_lobe_gain = 1.0;   // linear
  double side_lobe_gain = 1.0;   // linear
  double main_lobe_width = 2.0 * std::numbers::pi;  // radians

  bool valid() const {
    return main_lobe_gain >= side_lobe_gain && side_lobe_gain > 0.0 &&
           main_lobe_width > 0.0 && main_lobe_width <= 2.0 * std::numbers::pi;
  }
};

/// Side-lobe gain of an N-element array in the sectored model.
inline double sectored_side_lobe(std::size_t n_antennas) {
  const double s = std::sin(1.5 * std::numbers::pi / std::sqrt(static_cast<double>(n_antennas)));
  return 1.0 / (s * s);
}

/// All physical constants of a run. Call resolve() after filling fields to
/// compute the derived quantities and validate invariants.
struct SystemConfig {
  double carrier_hz = 28e9;
  double bandwidth_hz = 200e6;
  double tx_power_dbm = 8.0;
  double noise_figure_db = 10.0;
  std::size_t n_bs_antennas = 64;
  std::size_t n_ue_antennas = 4;
  double cell_radius_m = 100.0;
  double path_loss_exponent = 2.0;
  double antenna_gain_bs_dbi = 10.0;   // G_S
  double antenna_gain_ris_dbi = 10.0;  // G_Rn
  double antenna_gain_ue_dbi = 5.0;    // G_D
  double nakagami_m_los = 2.5;
  double nakagami_m_nlos = 1.5;
  std::size_t ris_elements = 64;       // L_n
  std::size_t n_users = 10;            // U
  double h_ut_m = 1.5;
  double reference_distance_m = 1.0;   // d_0
  double interferer_power_dbm = 8.0;   // uplink power of interfering users

  // Beam patterns; when auto (negative main-lobe gain) they are derived from
  // the antenna counts with the default beamwidths below.
  double tx_main_lobe_db = -1.0;
  double tx_side_lobe_db = 0.0;
  double tx_beamwidth_deg = 60.0;
  double rx_main_lobe_db = -1.0;
  double rx_side_lobe_db = 0.0;
  double rx_beamwidth_deg = 90.0;

  // Derived on resolve().
  double wavelength_m = 0.0;
  double zeta = 0.0;          // (lambda / 4 pi)^2
  double tx_power_w = 0.0;
  double interferer_power_w = 0.0;
  double noise_w = 0.0;
  AntennaPattern tx_pattern{};
  AntennaPattern rx_pattern{};

  void resolve() {
    if (!(carrier_hz > 0.0) || !(bandwidth_hz > 0.0))
      throw InvalidInput("SystemConfig: carrier and bandwidth must be positive");
    if (path_loss_exponent < 2.0)
      throw InvalidInput("SystemConfig: path loss exponent must be >= 2");
    if (n_bs_antennas < 1 || n_ue_antennas < 1 || ris_elements < 1 || n_users < 1)
      throw InvalidInput("SystemConfig: counts must be >= 1");
    if (!std::isfinite(tx_power_dbm) || !std::isfinite(noise_figure_db))
      throw InvalidInput("SystemConfig: powers must be finite");
    if (!(reference_distance_m > 0.0))
      throw InvalidInput("SystemConfig: reference distance must be positive");
    wavelength_m = kSpeedOfLight / carrier_hz;
    const double f = wavelength_m / (4.0 * std::numbers::pi);
    zeta = f * f;
    tx_power_w = dbm_to_watts(tx_power_dbm);
    interferer_power_w = dbm_to_watts(interferer_power_dbm);
    // Thermal floor -174 dBm/Hz plus bandwidth and noise figure.
    noise_w = dbm_to_watts(-174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
    tx_pattern = make_pattern(tx_main_lobe_db, tx_side_lobe_db, tx_beamwidth_deg, n_bs_antennas);
    rx_pattern = make_pattern(rx_main_lobe_db, rx_side_lobe_db, rx_beamwidth_deg, n_ue_antennas);
  }

 private:
  static AntennaPattern make_pattern(double main_db, double side_db, double width_deg,
                                     std::size_t n_antennas) {
    AntennaPattern p;
    p.main_lobe_width = width_deg * std::numbers::pi / 180.0;
    if (main_db < 0.0 && side_db == 0.0) {
      p.main_lobe_gain = static_cast<double>(n_antennas);
      p.side_lobe_gain = std::min(sectored_side_lobe(n_antennas), p.main_lobe_gain);
    } else {
      p.main_lobe_gain = db_to_linear(main_db);
      p.side_lobe_gain = db_to_linear(side_db);
    }
    if (!p.valid()) throw InvalidInput("SystemConfig: invalid antenna pattern");
    return p;
  }
};

/// Nakagami fading description of one link; omega is the mean square
/// envelope (path loss folds in here when the caller wants physical draws).
struct FadingLink {
  double m = 1.0;
  double omega = 1.0;
  double distance = 0.0;

  bool valid() const { return m > 0.0 && omega > 0.0; }
};

/// Far-field mean power: (lambda/4pi)^2 d^-alpha times the linear antenna
/// gains of the two link ends. Distances below d_0 are clamped.
inline double pathloss_omega(double distance_m, const SystemConfig& cfg,
                             double gain_tx_dbi, double gain_rx_dbi,
                             bool* clamped = nullptr) {
  double d = distance_m;
  if (d < cfg.reference_distance_m) {
    d = cfg.reference_distance_m;
    if (clamped) *clamped = true;
  } else if (clamped) {
    *clamped = false;
  }
  return cfg.zeta * std::pow(d, -cfg.path_loss_exponent) *
         db_to_linear(gain_tx_dbi) * db_to_linear(gain_rx_dbi);
}

inline double pathloss_bs_ue(double d, const SystemConfig& cfg, bool* clamped = nullptr) {
  return pathloss_omega(d, cfg, cfg.antenna_gain_bs_dbi, cfg.antenna_gain_ue_dbi, clamped);
}
inline double pathloss_bs_ris(double d, const SystemConfig& cfg, bool* clamped = nullptr) {
  return pathloss_omega(d, cfg, cfg.antenna_gain_bs_dbi, cfg.antenna_gain_ris_dbi, clamped);
}
inline double pathloss_ris_ue(double d, const SystemConfig& cfg, bool* clamped = nullptr) {
  return pathloss_omega(d, cfg, cfg.antenna_gain_ris_dbi, cfg.antenna_gain_ue_dbi, clamped);
}

/// Directivity gain draw in the sectored model. Serving beams are aligned
/// (both main lobes); otherwise the four lobe combinations occur with
/// beamwidth-proportional probabilities.
inline double sectored_gain(const AntennaPattern& tx, const AntennaPattern& rx,
                            bool aligned, RngStream& rng) {
  if (!tx.valid() || !rx.valid()) throw InvalidInput("sectored_gain: invalid pattern");
  if (aligned) return tx.main_lobe_gain * rx.main_lobe_gain;
  const double pt = tx.main_lobe_width / (2.0 * std::numbers::pi);
  const double pr = rx.main_lobe_width / (2.0 * std::numbers::pi);
  const double gt = rng.uniform() < pt ? tx.main_lobe_gain : tx.side_lobe_gain;
  const double gr = rng.uniform() < pr ? rx.main_lobe_gain : rx.side_lobe_gain;
  return gt * gr;
}

/// Mean misaligned gain, exact over the four lobe outcomes.
inline double expected_misaligned_gain(const AntennaPattern& tx, const AntennaPattern& rx) {
  const double pt = tx.main_lobe_width / (2.0 * std::numbers::pi);
  const double pr = rx.main_lobe_width / (2.0 * std::numbers::pi);
  const double et = pt * tx.main_lobe_gain + (1.0 - pt) * tx.side_lobe_gain;
  const double er = pr * rx.main_lobe_gain + (1.0 - pr) * rx.side_lobe_gain;
  return et * er;
}

/// i.i.d. Nakagami envelopes with uniform phases.
inline CMat sample_channel_matrix(std::size_t rows, std::size_t cols,
                                  const FadingLink& link, RngStream& rng) {
  if (!link.valid()) throw InvalidInput("sample_channel_matrix: invalid fading link");
  CMat h(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      h(i, j) = sample_nakagami(link.m, link.omega, rng) * rng.unit_phase();
  return h;
}

/// Complex matrices of one trial. Fading draws are normalized (unit mean
/// square envelope); path loss enters the SINR expressions explicitly.
struct ChannelRealization {
  std::vector<CMat> h_list;  // per RIS, L x N_b (or L x 1 in the reduced model)
  std::vector<CMat> g_list;  // per RIS, L x N_u (or L x 1)
  CMat h_d;                  // N_u x N_b (or 1 x 1)
  double interference_power = 0.0;  // watts
};

/// Aggregate interference at the tagged user from the other users, Eq.-style
/// mixture: each interferer is direct with probability Pr_LoS of its
/// distance, otherwise reflected through one uniformly chosen idle surface
/// with uncontrolled phases. Misaligned sectored gains throughout.
inline double sample_interference(const SystemConfig& cfg, const Deployment& dep,
                                  std::size_t tu_index,
                                  const std::vector<std::size_t>& selected_ris,
                                  RngStream& rng) {
  if (dep.user_points.empty()) throw InvalidInput("sample_interference: no users");
  const Point2D tu = dep.user_points[tu_index];

  std::vector<std::size_t> idle;
  idle.reserve(dep.ris_points.size());
  for (std::size_t i = 0; i < dep.ris_points.size(); ++i) {
    bool sel = false;
    for (std::size_t s : selected_ris) sel |= (s == i);
    if (!sel) idle.push_back(i);
  }

  double total = 0.0;
  for (std::size_t k = 0; k < dep.user_points.size(); ++k) {
    if (k == tu_index) continue;
    const double xi = std::max(distance(dep.user_points[k], tu), cfg.reference_distance_m);
    const double rho = sectored_gain(cfg.tx_pattern, cfg.rx_pattern, false, rng);
    const double p_los = los_probability(xi, cfg.h_ut_m);
    double channel_power;
    double omega_path;
    if (rng.uniform() < p_los || idle.empty()) {
      const double env = sample_nakagami(cfg.nakagami_m_los, 1.0, rng);
      channel_power = env * env;
      omega_path = pathloss_bs_ue(xi, cfg);
    } else {
      // Reflected path through an uncontrolled idle surface.
      const std::size_t ridx = idle[static_cast<std::size_t>(rng.uniform() *
                                    static_cast<double>(idle.size())) % idle.size()];
      const Point2D rp = dep.ris_points[ridx];
      const double d1 = std::max(distance(dep.user_points[k], rp), cfg.reference_distance_m);
      const double d2 = std::max(distance(rp, tu), cfg.reference_distance_m);
      std::complex<double> cascade{0.0, 0.0};
      for (std::size_t l = 0; l < cfg.ris_elements; ++l) {
        const double a = sample_nakagami(cfg.nakagami_m_nlos, 1.0, rng);
        const double b = sample_nakagami(cfg.nakagami_m_nlos, 1.0, rng);
        cascade += a * b * rng.unit_phase();
      }
      channel_power = std::norm(cascade);
      omega_path = pathloss_bs_ris(d1, cfg) * pathloss_ris_ue(d2, cfg);
    }
    total += channel_power * rho * cfg.interferer_power_w * omega_path;
  }
  return total;
}

}  // namespace riscov
