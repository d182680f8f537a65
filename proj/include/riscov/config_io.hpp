#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "riscov/errors.hpp"
#include "riscov/mcsim.hpp"

namespace riscov {

/// Thrown on malformed configuration text; carries the offending line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line)
      : std::runtime_error("config line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Sectioned key = value text ([system], [deployment], [scheme], [sim],
/// [analytics], [sweep]); '#' and ';' start comments. Keys are stored as
/// "section.key".
class ConfigMap {
 public:
  static ConfigMap parse(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto comment = line.find_first_of("#;");
      if (comment != std::string::npos) line.erase(comment);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      if (trimmed.front() == '[') {
        if (trimmed.back() != ']')
          throw ConfigError("unterminated section header", lineno);
        section = trim(trimmed.substr(1, trimmed.size() - 2));
        if (section.empty()) throw ConfigError("empty section name", lineno);
        continue;
      }
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw ConfigError("expected key = value", lineno);
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty()) throw ConfigError("empty key", lineno);
      if (section.empty()) throw ConfigError("key outside any section", lineno);
      cfg.values_[section + "." + key] = value;
    }
    return cfg;
  }

  /// key=value override in "section.key=value" form.
  void set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("override '" + assignment + "' is not key=value");
    values_[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_number(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_number(key, it->second);
  }

  bool get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "on" || it->second == "1") return true;
    if (it->second == "false" || it->second == "off" || it->second == "0") return false;
    throw InvalidInput("key '" + key + "': expected a boolean, got '" + it->second + "'");
  }

  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const std::string t = trim(tok);
      if (!t.empty()) out.push_back(parse_number(key, t));
    }
    return out;
  }

  const std::map<std::string, std::string>& entries() const { return values_; }

  /// Every key must be consumed by the binding below; anything else is a
  /// typo worth failing loudly on.
  void check_known(const std::vector<std::string>& known) const {
    for (const auto& [key, value] : values_) {
      bool ok = false;
      for (const auto& k : known) ok |= (k == key);
      if (!ok) throw InvalidInput("unknown configuration key '" + key + "'");
    }
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static double parse_number(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      throw InvalidInput("key '" + key + "': expected a number, got '" + text + "'");
    }
    if (used != text.size())
      throw InvalidInput("key '" + key + "': trailing characters in '" + text + "'");
    return v;
  }

  std::map<std::string, std::string> values_;
};

namespace detail {

inline const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "system.carrier_ghz", "system.bandwidth_mhz", "system.tx_power_dbm",
      "system.noise_figure_db", "system.bs_antennas", "system.ue_antennas",
      "system.users", "system.cell_radius_m", "system.path_loss_exponent",
      "system.gain_bs_dbi", "system.gain_ris_dbi", "system.gain_ue_dbi",
      "system.nakagami_m_los", "system.nakagami_m_nlos", "system.ris_elements",
      "system.h_ut_m", "system.reference_distance_m", "system.interferer_power_dbm",
      "system.tx_main_lobe_db", "system.tx_side_lobe_db", "system.tx_beamwidth_deg",
      "system.rx_main_lobe_db", "system.rx_side_lobe_db", "system.rx_beamwidth_deg",
      "deployment.model", "deployment.ris_density_per_m2", "deployment.fixed_count",
      "deployment.pcp_mean_per_cluster", "deployment.pcp_scatter_std_m",
      "scheme.name", "scheme.k_select", "scheme.qb_block", "scheme.qb_tol",
      "scheme.qb_max_rank", "scheme.qb_power_iters", "scheme.combining",
      "sim.trials", "sim.seed", "sim.thresholds_db", "sim.interference",
      "sim.channel_model", "sim.estimator", "sim.association", "sim.tu_mode",
      "sim.tu_distance_m", "sim.rate_cap_db", "sim.threads",
      "analytics.lambda_r", "analytics.alpha_l", "analytics.alpha_n",
      "analytics.c_l", "analytics.c_n", "analytics.quad_tol",
      "analytics.user_density_per_m2",
      "sweep.variable", "sweep.values"};
  return keys;
}

}  // namespace detail

/// Binds a parsed ConfigMap onto the experiment configuration. Every unit
/// lives in the key name; dB/dBm convert at this boundary only.
inline ExperimentConfig experiment_from_config(const ConfigMap& cm) {
  cm.check_known(detail::known_config_keys());
  ExperimentConfig ec;
  SystemConfig& sys = ec.system;
  sys.carrier_hz = cm.get_number("system.carrier_ghz", 28.0) * 1e9;
  sys.bandwidth_hz = cm.get_number("system.bandwidth_mhz", 200.0) * 1e6;
  sys.tx_power_dbm = cm.get_number("system.tx_power_dbm", 8.0);
  sys.noise_figure_db = cm.get_number("system.noise_figure_db", 10.0);
  sys.n_bs_antennas = static_cast<std::size_t>(cm.get_number("system.bs_antennas", 64));
  sys.n_ue_antennas = static_cast<std::size_t>(cm.get_number("system.ue_antennas", 4));
  sys.n_users = static_cast<std::size_t>(cm.get_number("system.users", 10));
  sys.cell_radius_m = cm.get_number("system.cell_radius_m", 100.0);
  sys.path_loss_exponent = cm.get_number("system.path_loss_exponent", 2.0);
  sys.antenna_gain_bs_dbi = cm.get_number("system.gain_bs_dbi", 10.0);
  sys.antenna_gain_ris_dbi = cm.get_number("system.gain_ris_dbi", 10.0);
  sys.antenna_gain_ue_dbi = cm.get_number("system.gain_ue_dbi", 5.0);
  sys.nakagami_m_los = cm.get_number("system.nakagami_m_los", 2.5);
  sys.nakagami_m_nlos = cm.get_number("system.nakagami_m_nlos", 1.5);
  sys.ris_elements = static_cast<std::size_t>(cm.get_number("system.ris_elements", 64));
  sys.h_ut_m = cm.get_number("system.h_ut_m", 1.5);
  sys.reference_distance_m = cm.get_number("system.reference_distance_m", 1.0);
  sys.interferer_power_dbm =
      cm.get_number("system.interferer_power_dbm", sys.tx_power_dbm);
  sys.tx_main_lobe_db = cm.get_number("system.tx_main_lobe_db", -1.0);
  sys.tx_side_lobe_db = cm.get_number("system.tx_side_lobe_db", 0.0);
  sys.tx_beamwidth_deg = cm.get_number("system.tx_beamwidth_deg", 60.0);
  sys.rx_main_lobe_db = cm.get_number("system.rx_main_lobe_db", -1.0);
  sys.rx_side_lobe_db = cm.get_number("system.rx_side_lobe_db", 0.0);
  sys.rx_beamwidth_deg = cm.get_number("system.rx_beamwidth_deg", 90.0);
  sys.resolve();

  const std::string model = cm.get_string("deployment.model", "ppp");
  if (model == "ppp") ec.deployment_model = DeploymentModel::Ppp;
  else if (model == "pcp") ec.deployment_model = DeploymentModel::Pcp;
  else if (model == "fixed") ec.deployment_model = DeploymentModel::FixedCount;
  else throw InvalidInput("deployment.model: unknown value '" + model + "'");
  ec.ris_density = cm.get_number("deployment.ris_density_per_m2", 6e-4);
  ec.fixed_count = static_cast<std::size_t>(cm.get_number("deployment.fixed_count", 0));
  ec.pcp.mean_per_cluster = cm.get_number("deployment.pcp_mean_per_cluster", 3.0);
  ec.pcp.scatter_std = cm.get_number("deployment.pcp_scatter_std_m", 0.0);

  ec.scheme = SchemeSpec::parse(cm.get_string("scheme.name", "optimal"));
  ec.k_select = static_cast<std::size_t>(cm.get_number("scheme.k_select", 1));
  ec.scheme.qb.block = static_cast<std::size_t>(cm.get_number("scheme.qb_block", 16));
  ec.scheme.qb.tol = cm.get_number("scheme.qb_tol", 1e-3);
  ec.scheme.qb.max_rank = static_cast<std::size_t>(cm.get_number("scheme.qb_max_rank", 48));
  ec.scheme.qb.power_iters = static_cast<int>(cm.get_number("scheme.qb_power_iters", 2));
  const std::string comb = cm.get_string("scheme.combining", "per_surface");
  if (comb == "per_surface") ec.combining = ReflectiveCombining::PerSurface;
  else if (comb == "coherent") ec.combining = ReflectiveCombining::Coherent;
  else throw InvalidInput("scheme.combining: unknown value '" + comb + "'");

  ec.n_trials = static_cast<std::size_t>(cm.get_number("sim.trials", 1000));
  ec.base_seed = static_cast<std::uint64_t>(cm.get_number("sim.seed", 1));
  ec.thresholds_db = cm.get_list("sim.thresholds_db", ec.thresholds_db);
  ec.with_interference = cm.get_bool("sim.interference", true);
  const std::string chan = cm.get_string("sim.channel_model", "scalar");
  if (chan == "scalar") ec.channel_model = ChannelModel::Scalar;
  else if (chan == "matrix") ec.channel_model = ChannelModel::Matrix;
  else throw InvalidInput("sim.channel_model: unknown value '" + chan + "'");
  const std::string est = cm.get_string("sim.estimator", "weighted");
  if (est == "weighted") ec.estimator = CoverageEstimator::WeightedSinr;
  else if (est == "mixture") ec.estimator = CoverageEstimator::AssociationMixture;
  else throw InvalidInput("sim.estimator: unknown value '" + est + "'");
  const std::string assoc = cm.get_string("sim.association", "max_sinr");
  if (assoc == "max_sinr") ec.association = AssociationRule::MaxSinr;
  else if (assoc == "min_product") ec.association = AssociationRule::MinProduct;
  else throw InvalidInput("sim.association: unknown value '" + assoc + "'");
  const std::string tu = cm.get_string("sim.tu_mode", "all_users");
  if (tu == "all_users") ec.tu_mode = TuMode::AllUsers;
  else if (tu == "ergodic_tu") ec.tu_mode = TuMode::ErgodicTu;
  else if (tu == "fixed_distance") ec.tu_mode = TuMode::FixedDistance;
  else throw InvalidInput("sim.tu_mode: unknown value '" + tu + "'");
  ec.tu_distance_m = cm.get_number("sim.tu_distance_m", 40.0);
  ec.rate_cap_db = cm.get_number("sim.rate_cap_db", -3.0);
  ec.n_threads = static_cast<std::size_t>(cm.get_number("sim.threads", 1));
  ec.validate();
  return ec;
}

inline AnalyticsParams analytics_from_config(const ConfigMap& cm,
                                             const ExperimentConfig& ec) {
  AnalyticsParams ap;
  ap.lambda_r = cm.get_number("analytics.lambda_r", ec.ris_density);
  ap.alpha_l = cm.get_number("analytics.alpha_l", 2.0);
  ap.alpha_n = cm.get_number("analytics.alpha_n", 4.0);
  ap.c_l = cm.get_number("analytics.c_l", 0.0);
  ap.c_n = cm.get_number("analytics.c_n", 0.0);
  ap.quad_tol = cm.get_number("analytics.quad_tol", 1e-6);
  const double user_density = cm.get_number("analytics.user_density_per_m2", 0.0);
  if (user_density < 0.0) throw InvalidInput("invalid user density");
  if (cm.has("analytics.user_density_per_m2") && user_density == 0.0)
    throw InvalidInput("invalid user density");
  return ap;
}

/// Canonical text form of the resolved configuration; hashed into the run
/// manifest and reparsed on replay.
inline std::string serialize_config(const ConfigMap& cm) {
  std::map<std::string, std::map<std::string, std::string>> by_section;
  for (const auto& [key, value] : cm.entries()) {
    const auto dot = key.find('.');
    by_section[key.substr(0, dot)][key.substr(dot + 1)] = value;
  }
  std::string out;
  for (const auto& [section, kvs] : by_section) {
    out += "[" + section + "]\n";
    for (const auto& [k, v] : kvs) out += k + " = " + v + "\n";
  }
  return out;
}

inline std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace riscov
