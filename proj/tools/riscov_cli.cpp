// Command-line front end: experiment orchestration, analytic curve
// evaluation, figure-trend recipes, CSV/JSON emission.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "riscov/analytics.hpp"
#include "riscov/config_io.hpp"
#include "riscov/io.hpp"
#include "riscov/mcsim.hpp"
#include "riscov/recipes.hpp"

namespace {

using namespace riscov;
using Clock = std::chrono::steady_clock;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  std::uint64_t seed = 0;  // 0 = keep config value
  std::size_t trials = 0;
  std::size_t threads = 0;
};

ConfigMap load_config(const CommonArgs& args) {
  ConfigMap cm;
  if (!args.config_path.empty()) cm = ConfigMap::parse(read_text_file(args.config_path));
  for (const auto& ov : args.overrides) cm.set(ov);
  if (args.seed) cm.set("sim.seed=" + std::to_string(args.seed));
  if (args.trials) cm.set("sim.trials=" + std::to_string(args.trials));
  if (args.threads) cm.set("sim.threads=" + std::to_string(args.threads));
  return cm;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const ConfigMap& cm, const std::vector<std::string>& outputs,
                    double runtime_s, std::uint64_t seed,
                    const std::string& recipe = "") {
  nlohmann::json m;
  m["tool"] = kToolVersion;
  m["command"] = command;
  if (!recipe.empty()) m["recipe"] = recipe;
  const std::string resolved = serialize_config(cm);
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a_hash(resolved)));
  m["config_hash"] = hash;
  m["resolved_config"] = resolved;
  m["base_seed"] = seed;
  m["runtime_seconds"] = runtime_s;
  m["outputs"] = outputs;
  write_text_file(out_dir + "/manifest.json", m.dump(2) + "\n");
}

std::vector<double> sweep_values(const ConfigMap& cm) {
  if (cm.get_string("sweep.variable", "none") == "ris_density")
    return cm.get_list("sweep.values", {});
  return {};
}

CsvTable rate_table(const RateSummary& rs) {
  CsvTable t;
  t.header = {"user", "rate_mbps"};
  for (std::size_t u = 0; u < rs.per_user_rate.size(); ++u)
    t.rows.push_back({static_cast<double>(u), rs.per_user_rate[u] / 1e6});
  t.rows.push_back({-1.0, rs.sum_rate / 1e6});  // -1 marks the sum row
  return t;
}

CsvTable coverage_table(const CoverageCurve& c) {
  CsvTable t;
  t.header = {"threshold_db", "coverage", "ci"};
  for (std::size_t i = 0; i < c.threshold_db.size(); ++i)
    t.rows.push_back({c.threshold_db[i], c.coverage[i], c.ci_halfwidth[i]});
  return t;
}

int cmd_simulate(const CommonArgs& args) {
  const auto t0 = Clock::now();
  const ConfigMap cm = load_config(args);
  const ExperimentConfig base = experiment_from_config(cm);
  std::filesystem::create_directories(args.out_dir);
  std::vector<std::string> outputs;
  const auto lambdas = sweep_values(cm);
  auto emit = [&](const ExperimentConfig& ec, const std::string& tag) {
    const auto all = run_trials(ec);
    const std::string cov_name = tag.empty() ? "coverage.csv" : "coverage_" + tag + ".csv";
    const std::string rate_name = tag.empty() ? "rate.csv" : "rate_" + tag + ".csv";
    write_text_file(args.out_dir + "/" + cov_name,
                    coverage_table(coverage_curve_from(all, ec)).to_string());
    write_text_file(args.out_dir + "/" + rate_name,
                    rate_table(rate_summary_from(all, ec)).to_string());
    outputs.push_back(cov_name);
    outputs.push_back(rate_name);
  };
  if (lambdas.empty()) {
    emit(base, "");
  } else {
    for (double lam : lambdas) {
      ExperimentConfig ec = base;
      ec.ris_density = lam;
      emit(ec, "lambda_" + detail::suffix(lam));
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  write_manifest(args.out_dir, "simulate", cm, outputs, secs, base.base_seed);
  std::printf("simulate: wrote %zu files to %s\n", outputs.size() + 1,
              args.out_dir.c_str());
  return 0;
}

int cmd_analyze(const CommonArgs& args) {
  const auto t0 = Clock::now();
  const ConfigMap cm = load_config(args);
  const ExperimentConfig base = experiment_from_config(cm);
  const AnalyticsParams ap = analytics_from_config(cm, base);
  std::filesystem::create_directories(args.out_dir);
  auto lambdas = sweep_values(cm);
  if (lambdas.empty()) lambdas = {ap.lambda_r};
  CsvTable t;
  t.header = {"lambda_per_m2"};
  for (double tdb : base.thresholds_db)
    t.header.push_back("coverage_t" + detail::suffix(tdb) + "db");
  for (double lam : lambdas) {
    AnalyticsParams p = ap;
    p.lambda_r = lam;
    const Analytics an(base.system, p);
    std::vector<double> row{lam};
    for (double tdb : base.thresholds_db)
      row.push_back(an.ergodic_coverage(db_to_linear(tdb)));
    t.rows.push_back(std::move(row));
  }
  write_text_file(args.out_dir + "/analytic_coverage.csv", t.to_string());
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  write_manifest(args.out_dir, "analyze", cm, {"analytic_coverage.csv"}, secs,
                 base.base_seed);
  std::printf("analyze: wrote analytic_coverage.csv to %s\n", args.out_dir.c_str());
  return 0;
}

int cmd_figure(const std::string& recipe, const CommonArgs& args) {
  const auto t0 = Clock::now();
  RecipeOptions opt;
  opt.seed = args.seed ? args.seed : 1;
  opt.trials = args.trials;
  opt.threads = args.threads ? args.threads : 1;
  const RecipeRun run = run_recipe(recipe, opt);
  std::filesystem::create_directories(args.out_dir);
  std::vector<std::string> outputs;
  for (const auto& out : run.outputs) {
    write_text_file(args.out_dir + "/" + out.filename, out.table.to_string());
    outputs.push_back(out.filename);
  }
  ConfigMap cm;
  cm.set("sim.seed=" + std::to_string(opt.seed));
  if (opt.trials) cm.set("sim.trials=" + std::to_string(opt.trials));
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  write_manifest(args.out_dir, "figure", cm, outputs, secs, opt.seed, recipe);
  std::printf("figure %s: wrote %zu files to %s\n", recipe.c_str(), outputs.size() + 1,
              args.out_dir.c_str());
  return 0;
}

int cmd_compare(const std::string& schemes_csv, const CommonArgs& args) {
  const auto t0 = Clock::now();
  const ConfigMap cm = load_config(args);
  const ExperimentConfig base = experiment_from_config(cm);
  std::vector<std::string> schemes;
  std::stringstream ss(schemes_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) schemes.push_back(tok);
  const auto cmp = compare_schemes(base, schemes);
  std::filesystem::create_directories(args.out_dir);
  std::vector<std::string> outputs;
  for (const auto& c : cmp) {
    std::string label = c.scheme;
    for (char& ch : label)
      if (ch == ':') ch = '_';
    const std::string cov = "coverage_" + label + ".csv";
    const std::string rate = "rate_" + label + ".csv";
    write_text_file(args.out_dir + "/" + cov, coverage_table(c.coverage).to_string());
    write_text_file(args.out_dir + "/" + rate, rate_table(c.rate).to_string());
    outputs.push_back(cov);
    outputs.push_back(rate);
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  write_manifest(args.out_dir, "compare", cm, outputs, secs, base.base_seed);
  std::printf("compare: wrote %zu files to %s\n", outputs.size() + 1, args.out_dir.c_str());
  return 0;
}

void add_common(CLI::App* sub, CommonArgs& args, bool needs_config) {
  auto* c = sub->add_option("--config", args.config_path, "configuration file path");
  if (needs_config) c->required();
  sub->add_option("--set", args.overrides, "override as section.key=value (repeatable)");
  sub->add_option("--seed", args.seed, "base seed override");
  sub->add_option("--trials", args.trials, "trial count override");
  sub->add_option("--out", args.out_dir, "output directory");
  sub->add_option("--threads", args.threads, "worker thread count");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic-geometry coverage/rate simulator for multi-surface-assisted"
               " dual-hop mmWave cells"};
  app.require_subcommand(1);

  CommonArgs sim_args, ana_args, fig_args, cmp_args;
  std::string recipe, schemes = "optimal,random";

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo coverage and rate");
  add_common(simulate, sim_args, true);
  auto* analyze = app.add_subcommand("analyze", "closed-form ergodic coverage curves");
  add_common(analyze, ana_args, true);
  auto* figure = app.add_subcommand("figure", "run a named figure-trend recipe");
  figure->add_option("--recipe", recipe, "recipe name (fig4..fig13)")->required();
  add_common(figure, fig_args, false);
  auto* compare = app.add_subcommand("compare", "paired scheme comparison");
  compare->add_option("--schemes", schemes, "comma-separated scheme names");
  add_common(compare, cmp_args, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(sim_args);
    if (analyze->parsed()) return cmd_analyze(ana_args);
    if (figure->parsed()) return cmd_figure(recipe, fig_args);
    if (compare->parsed()) return cmd_compare(schemes, cmp_args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    const std::string what = e.what();
    if (what.find("user density") != std::string::npos ||
        what.find("user mass") != std::string::npos)
      return 3;
    return 2;
  }
  return 0;
}
