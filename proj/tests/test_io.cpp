#include <gtest/gtest.h>

#include "riscov/config_io.hpp"
#include "riscov/io.hpp"
#include "riscov/rng.hpp"

using namespace riscov;

TEST(ConfigMap, ParseSectionsCommentsAndTypes) {
  const std::string text =
      "# comment\n"
      "[system]\n"
      "carrier_ghz = 28  ; trailing comment\n"
      "bs_antennas = 64\n"
      "\n"
      "[sim]\n"
      "thresholds_db = -10, 0, 10\n"
      "interference = false\n";
  const auto cm = ConfigMap::parse(text);
  EXPECT_DOUBLE_EQ(cm.get_number("system.carrier_ghz", 0.0), 28.0);
  EXPECT_DOUBLE_EQ(cm.get_number("system.bs_antennas", 0.0), 64.0);
  EXPECT_FALSE(cm.get_bool("sim.interference", true));
  const auto list = cm.get_list("sim.thresholds_db", {});
  ASSERT_EQ(list.size(), 3u);
  EXPECT_DOUBLE_EQ(list[1], 0.0);
  EXPECT_EQ(cm.get_string("sim.absent", "dflt"), "dflt");
}

TEST(ConfigMap, LinePreciseErrors) {
  try {
    ConfigMap::parse("[system]\ncarrier_ghz 28\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  try {
    ConfigMap::parse("key = 1\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 1);
  }
  EXPECT_THROW(ConfigMap::parse("[system\n"), ConfigError);
}

TEST(ConfigMap, UnknownKeyNamedInError) {
  auto cm = ConfigMap::parse("[system]\ncarrier_ghz = 28\n");
  cm.set("system.no_such_thing=5");
  try {
    experiment_from_config(cm);
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("system.no_such_thing"), std::string::npos);
  }
}

TEST(ConfigMap, BadValuesRejected) {
  auto cm = ConfigMap::parse("[system]\ncarrier_ghz = fast\n");
  EXPECT_THROW(experiment_from_config(cm), InvalidInput);
  auto cm2 = ConfigMap::parse("[scheme]\nname = warp\n");
  EXPECT_THROW(experiment_from_config(cm2), InvalidInput);
  auto cm3 = ConfigMap::parse("[sim]\nestimator = vibes\n");
  EXPECT_THROW(experiment_from_config(cm3), InvalidInput);
}

TEST(ConfigMap, DefaultsAndOverridesBind) {
  auto cm = ConfigMap::parse("[deployment]\nris_density_per_m2 = 1.5e-4\n");
  cm.set("sim.trials=77");
  cm.set("scheme.name=quantized:5");
  const auto ec = experiment_from_config(cm);
  EXPECT_DOUBLE_EQ(ec.ris_density, 1.5e-4);
  EXPECT_EQ(ec.n_trials, 77u);
  EXPECT_EQ(ec.scheme.kind, PhaseScheme::Quantized);
  EXPECT_EQ(ec.scheme.bits, 5);
  EXPECT_EQ(ec.system.n_bs_antennas, 64u);  // Table defaults fill the rest
  EXPECT_NEAR(ec.system.noise_w, dbm_to_watts(-81.0), dbm_to_watts(-81.0) * 0.005);
}

TEST(ConfigMap, SerializationRoundTripsAndHashesStable) {
  auto cm = ConfigMap::parse("[system]\ncarrier_ghz = 28\n[sim]\ntrials = 10\n");
  const std::string s1 = serialize_config(cm);
  const auto cm2 = ConfigMap::parse(s1);
  EXPECT_EQ(serialize_config(cm2), s1);
  EXPECT_EQ(fnv1a_hash(s1), fnv1a_hash(s1));
  EXPECT_NE(fnv1a_hash(s1), fnv1a_hash(s1 + "x"));
}

TEST(CsvTable, RoundTripIsByteIdentical) {
  CsvTable t;
  t.header = {"threshold_db", "coverage", "ci"};
  RngStream rng(5, 5);
  for (int i = 0; i < 20; ++i)
    t.rows.push_back({-10.0 + i, rng.uniform(), rng.uniform() * 0.01});
  const std::string s1 = t.to_string();
  const std::string s2 = CsvTable::from_string(s1).to_string();
  EXPECT_EQ(s1, s2);
}

TEST(DeploymentJson, VersionedRoundTrip) {
  Deployment dep;
  dep.cell_radius = 100.0;
  RngStream rng(6, 6);
  for (int i = 0; i < 12; ++i) {
    dep.ris_points.push_back(sample_uniform_disk(100.0, rng));
    dep.los_marks.push_back(rng.uniform() < 0.5);
  }
  dep.user_points.push_back({40.0, -3.25});
  const auto j = deployment_to_json(dep);
  const Deployment back = deployment_from_json(j);
  EXPECT_EQ(back.cell_radius, dep.cell_radius);
  ASSERT_EQ(back.ris_points.size(), dep.ris_points.size());
  for (std::size_t i = 0; i < dep.ris_points.size(); ++i) {
    EXPECT_EQ(back.ris_points[i].x, dep.ris_points[i].x);
    EXPECT_EQ(back.ris_points[i].y, dep.ris_points[i].y);
    EXPECT_EQ(back.los_marks[i], dep.los_marks[i]);
  }
  auto bad = j;
  bad["version"] = 2;
  EXPECT_THROW(deployment_from_json(bad), InvalidInput);
  auto bad2 = j;
  bad2["los_marks"] = std::vector<bool>{true};
  EXPECT_THROW(deployment_from_json(bad2), InvalidInput);
}
