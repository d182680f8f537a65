#pragma once

#include <string>
#include <vector>

#include "riscov/analytics.hpp"
#include "riscov/io.hpp"
#include "riscov/mcsim.hpp"

namespace riscov {

struct RecipeOptions {
  std::uint64_t seed = 1;
  std::size_t trials = 0;  // 0 keeps each recipe's default
  std::size_t threads = 1;
};

struct RecipeOutput {
  std::string filename;
  CsvTable table;
};

struct RecipeRun {
  std::string name;
  std::vector<RecipeOutput> outputs;
};

inline const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names = {
      "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig13"};
  return names;
}

namespace detail {

inline ExperimentConfig desk_experiment(const RecipeOptions& opt) {
  ExperimentConfig ec;
  ec.system.resolve();
  ec.base_seed = opt.seed;
  ec.n_threads = std::max<std::size_t>(1, opt.threads);
  return ec;
}

inline std::string suffix(double v) {
  std::string s = format_number(v);
  for (char& c : s)
    if (c == '.' || c == '+') c = '_';
  return s;
}

inline CsvTable coverage_table(const CoverageCurve& c) {
  CsvTable t;
  t.header = {"threshold_db", "coverage", "ci"};
  for (std::size_t i = 0; i < c.threshold_db.size(); ++i)
    t.rows.push_back({c.threshold_db[i], c.coverage[i], c.ci_halfwidth[i]});
  return t;
}

// Coverage vs threshold, one file per parameterized arm.
template <typename Mutate>
void coverage_family(RecipeRun& run, ExperimentConfig ec, const std::string& stem,
                     const std::vector<double>& arms, const Mutate& mutate) {
  for (double arm : arms) {
    ExperimentConfig cfg = ec;
    mutate(cfg, arm);
    run.outputs.push_back({stem + suffix(arm) + ".csv", coverage_table(coverage_curve(cfg))});
  }
}

// Rate vs density sweep, one file per parameterized arm.
template <typename Mutate>
void rate_family(RecipeRun& run, ExperimentConfig ec, const std::string& stem,
                 const std::vector<double>& densities, const std::vector<double>& arms,
                 const Mutate& mutate) {
  for (double arm : arms) {
    CsvTable t;
    t.header = {"ris_density_per_m2", "rate_mbps"};
    for (double lam : densities) {
      ExperimentConfig cfg = ec;
      cfg.ris_density = lam;
      mutate(cfg, arm);
      const RateSummary rs = rate_summary(cfg);
      t.rows.push_back({lam, rs.per_user_rate[0] / 1e6});
    }
    run.outputs.push_back({stem + suffix(arm) + ".csv", std::move(t)});
  }
}

inline SystemConfig explicit_beam_config(double mt_db, double tx_width_deg,
                                         std::size_t n_users, std::size_t n_ue) {
  SystemConfig sys;
  sys.n_users = n_users;
  sys.n_ue_antennas = n_ue;
  sys.tx_main_lobe_db = mt_db;
  sys.tx_side_lobe_db = -10.0;
  sys.tx_beamwidth_deg = tx_width_deg;
  sys.rx_main_lobe_db = 10.0;
  sys.rx_side_lobe_db = -10.0;
  sys.rx_beamwidth_deg = 90.0;
  sys.resolve();
  return sys;
}

}  // namespace detail

/// Trend reproductions at desk scale. Every recipe pins its own constants;
/// seed, trial count, and threads come from the options.
inline RecipeRun run_recipe(const std::string& name, const RecipeOptions& opt) {
  RecipeRun run;
  run.name = name;
  auto trials = [&](std::size_t fallback) { return opt.trials ? opt.trials : fallback; };

  if (name == "fig4") {
    // Coverage vs threshold across surface densities.
    ExperimentConfig ec = detail::desk_experiment(opt);
    ec.system.n_users = 30;
    ec.system.n_ue_antennas = 4;
    ec.system.resolve();
    ec.with_interference = false;
    ec.estimator = CoverageEstimator::AssociationMixture;
    ec.tu_mode = TuMode::AllUsers;
    ec.n_trials = trials(1000);
    detail::coverage_family(run, ec, "fig4_lambda_", {1.5e-4, 1.5e-3, 5.5e-3},
                            [](ExperimentConfig& c, double lam) { c.ris_density = lam; });
  } else if (name == "fig5") {
    // Coverage vs threshold for 1 vs 4 user antennas.
    ExperimentConfig ec = detail::desk_experiment(opt);
    ec.ris_density = 5.5e-3;
    ec.estimator = CoverageEstimator::AssociationMixture;
    ec.tu_mode = TuMode::AllUsers;
    ec.n_trials = trials(2500);
    detail::coverage_family(run, ec, "fig5_nu_", {1.0, 4.0},
                            [](ExperimentConfig& c, double nu) {
                              c.system.n_ue_antennas = static_cast<std::size_t>(nu);
                              c.system.resolve();
                            });
  } else if (name == "fig6" || name == "fig13") {
    // Rate vs density for different element counts.
    ExperimentConfig ec = detail::desk_experiment(opt);
    ec.with_interference = false;
    ec.estimator = CoverageEstimator::AssociationMixture;
    ec.tu_mode = TuMode::ErgodicTu;
    ec.rate_cap_db = -3.0;
    ec.n_trials = trials(800);
    const std::vector<double> densities = {5e-4, 1e-3, 2e-3, 3.5e-3, 5.5e-3};
    const std::vector<double> elements =
        (name == "fig6") ? std::vector<double>{64, 256} : std::vector<double>{64, 128, 256};
    detail::rate_family(run, ec, name + "_elements_", densities, elements,
                        [](ExperimentConfig& c, double L) {
                          c.system.ris_elements = static_cast<std::size_t>(L);
                          c.system.resolve();
                        });
  } else if (name == "fig7") {
    // Rate vs density for the four phase-control schemes, common random
    // numbers, joint selection of three surfaces, coherent combining.
    ExperimentConfig ec = detail::desk_experiment(opt);
    ec.with_interference = false;
    ec.channel_model = ChannelModel::Matrix;
    ec.association = AssociationRule::MinProduct;
    ec.combining = ReflectiveCombining::Coherent;
    ec.estimator = CoverageEstimator::AssociationMixture;
    ec.tu_mode = TuMode::ErgodicTu;
    ec.k_select = 3;
    ec.rate_cap_db = -3.0;
    ec.n_trials = trials(500);
    const std::vector<double> densities = {5e-4, 1e-3, 2e-3, 4e-3};
    const std::vector<std::string> schemes = {"optimal", "suboptimal", "quantized:4",
                                              "random"};
    std::vector<CsvTable> tables(schemes.size());
    for (std::size_t s = 0; s < schemes.size(); ++s)
      tables[s].header = {"ris_density_per_m2", "rate_mbps"};
    for (double lam : densities) {
      ExperimentConfig cfg = ec;
      cfg.ris_density = lam;
      const auto cmp = compare_schemes(cfg, schemes);
      for (std::size_t s = 0; s < schemes.size(); ++s)
        tables[s].rows.push_back({lam, cmp[s].rate.per_user_rate[0] / 1e6});
    }
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      std::string label = schemes[s];
      for (char& c : label)
        if (c == ':') c = '_';
      run.outputs.push_back({"fig7_" + label + ".csv", std::move(tables[s])});
    }
  } else if (name == "fig8") {
    // Coverage vs threshold for 10 dB vs 20 dB transmit main lobes.
    ExperimentConfig ec = detail::desk_experiment(opt);
    ec.ris_density = 1.5e-3;
    ec.estimator = CoverageEstimator::AssociationMixture;
    ec.tu_mode = TuMode::AllUsers;
    ec.thresholds_db = {-10, -5, 0, 5, 10, 15, 20, 25, 30, 35};
    ec.n_trials = trials(1000);
    detail::coverage_family(run, ec, "fig8_mt_db_", {10.0, 20.0},
                            [](ExperimentConfig& c, double mt) {
                              c.system = detail::explicit_beam_config(mt, 60.0, 10, 1);
                            });
  } else if (name == "fig9") {
    // Coverage vs density at T = 10 dB for the two transmit main lobes.
    ExperimentConfig ec = detail::desk_experiment(opt);
    ec.estimator = CoverageEstimator::AssociationMixture;
    ec.tu_mode = TuMode::AllUsers;
    ec.thresholds_db = {10.0};
    ec.n_trials = trials(800);
    const std::vector<double> densities = {5e-4, 1e-3, 2e-3, 3.5e-3, 5e-3};
    for (double mt : {10.0, 20.0}) {
      CsvTable t;
      t.header = {"ris_density_per_m2", "coverage", "ci"};
      for (double lam : densities) {
        ExperimentConfig cfg = ec;
        cfg.system = detail::explicit_beam_config(mt, 60.0, 10, 1);
        cfg.ris_density = lam;
        const auto c = coverage_curve(cfg);
        t.rows.push_back({lam, c.coverage[0], c.ci_halfwidth[0]});
      }
      run.outputs.push_back({"fig9_mt_db_" + detail::suffix(mt) + ".csv", std::move(t)});
    }
  } else if (name == "fig10") {
    // Analytical vs simulated ergodic coverage over a density grid.
    const std::vector<double> densities = {1.5e-4, 3e-4, 6e-4, 1.2e-3, 2.5e-3, 5e-3};
    const SystemConfig sys = detail::explicit_beam_config(10.0, 60.0, 10, 1);
    for (double tdb : {0.0, 10.0}) {
      CsvTable t;
      t.header = {"ris_density_per_m2", "analytic_coverage", "simulated_coverage",
                  "simulated_ci"};
      for (double lam : densities) {
        AnalyticsParams ap;
        ap.lambda_r = lam;
        const Analytics an(sys, ap);
        const double analytic = an.ergodic_coverage(db_to_linear(tdb));
        ExperimentConfig ec = detail::desk_experiment(opt);
        ec.system = sys;
        ec.ris_density = lam;
        ec.n_trials = trials(2000);
        ec.with_interference = false;
        ec.estimator = CoverageEstimator::AssociationMixture;
        ec.tu_mode = TuMode::ErgodicTu;
        ec.thresholds_db = {tdb};
        const auto c = coverage_curve(ec);
        t.rows.push_back({lam, analytic, c.coverage[0], c.ci_halfwidth[0]});
      }
      run.outputs.push_back({"fig10_t_" + detail::suffix(tdb) + "db.csv", std::move(t)});
    }
  } else if (name == "fig11") {
    // Coverage vs threshold under PPP and Thomas-cluster deployments.
    ExperimentConfig ec = detail::desk_experiment(opt);
    ec.ris_density = 5.5e-3;
    ec.system = detail::explicit_beam_config(10.0, 60.0, 10, 1);
    ec.estimator = CoverageEstimator::AssociationMixture;
    ec.tu_mode = TuMode::AllUsers;
    ec.n_trials = trials(800);
    for (const std::string& model : {"ppp", "pcp"}) {
      ExperimentConfig cfg = ec;
      cfg.deployment_model = (model == "ppp") ? DeploymentModel::Ppp : DeploymentModel::Pcp;
      run.outputs.push_back(
          {"fig11_" + model + ".csv", detail::coverage_table(coverage_curve(cfg))});
    }
  } else {
    std::string names;
    for (const auto& n : recipe_names()) names += (names.empty() ? "" : ", ") + n;
    throw InvalidInput("unknown recipe '" + name + "'; available: " + names);
  }
  return run;
}

}  // namespace riscov
