// Copyright 2026 The samwinch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sam/harness/scenario.hpp"

namespace sam::harness {
namespace {

const std::string kSource = SAM_SOURCE_DIR;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Scenario short_run(double duration = 0.05) {
  Scenario s = parse_scenario("name = short\ntier = 3d\nduration = " + format_double(duration) +
                              "\ndt = 0.001\n");
  s.waypoints = {{duration > 0 ? duration : 1.0, Vector3d(0.01, 0.0, 0.0)}};
  return s;
}

std::vector<std::string> fields_of(const SchemaError& e) {
  std::vector<std::string> out;
  for (const auto& f : e.errors()) out.push_back(f.field);
  return out;
}

bool has(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

TEST(Schema, Exp1PresetParses) {
  const Scenario s = load_scenario(kSource + "/scenarios/exp1.cfg");
  EXPECT_EQ(s.name, "exp1");
  EXPECT_EQ(s.tier, Tier::k3d);
  EXPECT_EQ(s.plant, PlantKind::kCoupled);
  EXPECT_TRUE(s.winches);
  EXPECT_EQ(s.duration, 16.0);
  EXPECT_EQ(s.dt, 0.001);
  EXPECT_EQ(s.output_dir, "out/exp1");
  ASSERT_EQ(s.waypoints.size(), 3u);
  EXPECT_EQ(s.waypoints[0].t, 4.0);
  EXPECT_EQ(s.waypoints[0].offset, Vector3d(0.25, 0.0, 0.0));
  EXPECT_EQ(s.waypoints[1].t, 8.0);
  EXPECT_EQ(s.waypoints[2].offset, Vector3d::Zero());
  EXPECT_TRUE(s.payload.empty());
  EXPECT_EQ(format_params(s.params), format_params(default_params()));
  EXPECT_EQ(s.winch.length_min, 0.5);
  EXPECT_EQ(s.winch.length_max, 1.3);
}

TEST(Schema, Exp2PresetHasPayloadSteps) {
  const Scenario s = load_scenario(kSource + "/scenarios/exp2.cfg");
  ASSERT_EQ(s.payload.size(), 2u);
  EXPECT_GT(s.payload[0].mass, 0.0);
  EXPECT_EQ(s.payload[1].mass, 0.0);
  EXPECT_GE(s.duration, s.waypoints.back().t);
}

TEST(Schema, MissingDtIsNamed) {
  try {
    load_scenario(kSource + "/tests/data/missing_dt.cfg");
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_TRUE(has(fields_of(e), "dt"));
    EXPECT_NE(std::string(e.what()).find("dt"), std::string::npos);
  }
}

TEST(Schema, EveryOffendingFieldIsListed) {
  const std::string text =
      "name = bad\n"
      "tier = 4d\n"
      "duration = soon\n"
      "dt = -0.001\n"
      "winches = maybe\n"
      "colour = blue\n"
      "gains.stiffness_com = 1 2\n";
  try {
    parse_scenario(text);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    const auto f = fields_of(e);
    for (const char* k : {"tier", "duration", "dt", "winches", "colour", "gains.stiffness_com"})
      EXPECT_TRUE(has(f, k)) << k << " missing from\n" << e.what();
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 6"), std::string::npos) << msg;
  }
}

TEST(Schema, WaypointsMustIncreaseAndFitDuration) {
  const std::string base = "name = w\nduration = 2\ndt = 0.001\n";
  EXPECT_NO_THROW(parse_scenario(base + "waypoint = 1 0 0 0\nwaypoint = 2 0.1 0 0\n"));
  try {
    parse_scenario(base + "waypoint = 1 0 0 0\nwaypoint = 1 0.1 0 0\n");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_TRUE(has(fields_of(e), "waypoint"));
  }
  try {
    parse_scenario(base + "waypoint = 3 0 0 0\n");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_TRUE(has(fields_of(e), "duration"));
  }
  EXPECT_THROW(parse_scenario(base + "waypoint = 0 0 0 0\n"), SchemaError);
}

TEST(Schema, ParamsErrorsCarryFieldNames) {
  const auto dir = std::filesystem::temp_directory_path() / "samwinch_schema";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "bad.params") << "cable_length_min = 1.5\n";
  std::ofstream(dir / "s.cfg") << "name = p\nparams = bad.params\nduration = 1\ndt = 0.001\n";
  try {
    load_scenario((dir / "s.cfg").string());
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("length ordering"), std::string::npos) << e.what();
  }
}

TEST(Schema, CanonicalTextRoundTrips) {
  const Scenario s = load_scenario(kSource + "/scenarios/exp2.cfg");
  const Scenario r = parse_scenario(format_scenario(s), kSource + "/scenarios");
  EXPECT_EQ(format_scenario(r), format_scenario(s));
  EXPECT_EQ(config_hash(r), config_hash(s));
}

TEST(Waypoints, SmoothstepBetweenTargets) {
  const std::vector<Waypoint> w{{1.0, Vector3d(0.2, 0, 0)}, {3.0, Vector3d(0.2, 0.1, 0)}};
  EXPECT_EQ(waypoint_offset(w, 0.0), Vector3d::Zero());
  EXPECT_EQ(waypoint_offset(w, 1.0), Vector3d(0.2, 0, 0));
  EXPECT_LE((waypoint_offset(w, 0.5) - Vector3d(0.1, 0, 0)).norm(), 1e-15);
  EXPECT_LE((waypoint_offset(w, 2.0) - Vector3d(0.2, 0.05, 0)).norm(), 1e-15);
  EXPECT_EQ(waypoint_offset(w, 3.0), Vector3d(0.2, 0.1, 0));
  EXPECT_EQ(waypoint_offset(w, 10.0), Vector3d(0.2, 0.1, 0));
  // Continuous with zero slope at the knots.
  const double h = 1e-6;
  EXPECT_LE((waypoint_offset(w, 1.0 + h) - waypoint_offset(w, 1.0 - h)).norm(), 1e-10);
}

TEST(Run, ZeroDurationGivesSingleRecord) {
  const ScenarioLog log = run_scenario(short_run(0.0));
  ASSERT_EQ(log.rows.size(), 1u);
  EXPECT_EQ(log.summary_value("records"), 1.0);
  EXPECT_LE(log.summary_value("rmse_com_horizontal"), 1e-15);  // balancing round-off only
  EXPECT_EQ(log.summary_value("ee_rms_error"), 0.0);
}

TEST(Run, RecordCountIsDurationOverDtPlusOne) {
  const ScenarioLog log = run_scenario(short_run(0.05));
  EXPECT_EQ(log.rows.size(), 51u);
  EXPECT_EQ(log.rows.back()[log.column("t")], 0.05);
  for (const auto& r : log.rows) EXPECT_EQ(r.size(), log.columns.size());
}

TEST(Run, StartsBalancedBelowTheHook) {
  const ScenarioLog log = run_scenario(short_run(0.0));
  EXPECT_LE(std::abs(log.rows[0][log.column("com_x")]), 1e-15);
  EXPECT_LE(std::abs(log.rows[0][log.column("com_y")]), 1e-15);
}

TEST(Run, CsvRoundTripReproducesSummary) {
  const ScenarioLog log = run_scenario(short_run(0.1));
  const ScenarioLog back = read_csv(csv_text(log));
  EXPECT_EQ(back.name, log.name);
  EXPECT_EQ(back.config_hash, log.config_hash);
  EXPECT_EQ(back.columns, log.columns);
  ASSERT_EQ(back.summary.size(), log.summary.size());
  for (std::size_t i = 0; i < log.summary.size(); ++i) {
    EXPECT_EQ(back.summary[i].first, log.summary[i].first);
    EXPECT_EQ(back.summary[i].second, log.summary[i].second) << log.summary[i].first;
  }
  EXPECT_EQ(summary_text(back), summary_text(log));
}

TEST(Run, DeterministicCsv) {
  const Scenario s = load_scenario(kSource + "/scenarios/smoke.cfg");
  EXPECT_EQ(csv_text(run_scenario(s)), csv_text(run_scenario(s)));
}

TEST(Run, AbRunsShareBaseHash) {
  Scenario on = short_run(0.02);
  Scenario off = on;
  off.winches = false;
  off.output_dir = "elsewhere";
  const ScenarioLog a = run_scenario(on), b = run_scenario(off);
  EXPECT_EQ(a.base_hash, b.base_hash);
  EXPECT_NE(a.config_hash, b.config_hash);
  Scenario gains = on;
  gains.gains.stiffness_com *= 2.0;
  EXPECT_NE(hex64(base_hash(gains)), a.base_hash);
  // The header carries both.
  const std::string csv = csv_text(a);
  EXPECT_NE(csv.find("config_hash=" + a.config_hash), std::string::npos);
  EXPECT_NE(csv.find("base_hash=" + a.base_hash), std::string::npos);
}

TEST(Run, WinchesOffHoldPlatformAndOffsetGrows) {
  Scenario s = short_run(2.0);
  s.winches = false;
  s.waypoints = {{2.0, Vector3d(0.1, 0.0, 0.0)}};
  const ScenarioLog log = run_scenario(s);
  const auto xp = log.series("xp_x");
  for (double v : xp) EXPECT_EQ(v, xp.front());
  const auto com = log.series("com_x");
  EXPECT_LE(std::abs(com.front()), 1e-15);
  EXPECT_GT(com.back(), 5e-3);  // COM follows the arm out
  EXPECT_GT(log.summary_value("max_abs_com_x"), 5e-3);
}

TEST(Run, PayloadEventChangesMass) {
  Scenario s = short_run(0.05);
  s.payload = {{0.02, 0.5}, {0.04, 0.0}};
  const ScenarioLog log = run_scenario(s);
  const auto m = log.series("payload");
  EXPECT_EQ(m[19], 0.0);
  EXPECT_EQ(m[20], 0.5);
  EXPECT_EQ(m[39], 0.5);
  EXPECT_EQ(m[40], 0.0);
}

TEST(Run, InfeasibleCommandCarriesTimestamp) {
  Scenario s = parse_scenario("name = inf\nduration = 2\ndt = 0.001\nplatform_z = -1.35\nwaypoint = 1.5 0 0 0.15\n");
  try {
    run_scenario(s);
    FAIL() << "expected ScenarioError";
  } catch (const ScenarioError& e) {
    EXPECT_GT(e.time(), 0.5);
    EXPECT_LT(e.time(), 1.5);
    const std::string msg = e.what();
    EXPECT_EQ(msg.rfind("t = ", 0), 0u);
    EXPECT_NE(msg.find("infeasible"), std::string::npos);
    EXPECT_NE(msg.find("limit 1.3 m"), std::string::npos);
  }
  s.platform_z = -1.5;
  try {
    run_scenario(s);
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.time(), 0.0);
  }
}

TEST(Run, DivergenceCarriesTimestamp) {
  const Scenario s = parse_scenario(
      "name = div\nduration = 1\ndt = 0.01\ngains.stiffness_ee = 1e8 1e8 1e8 1e7 1e7 1e7\n"
      "waypoint = 0.5 0.02 0 0\n");
  try {
    run_scenario(s);
    FAIL() << "expected ScenarioError";
  } catch (const ScenarioError& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LT(e.time(), 1.0);
    EXPECT_NE(std::string(e.what()).find("diverged"), std::string::npos);
  }
}

TEST(Run, PlanarTierKeepsLoopClosed) {
  Scenario s = load_scenario(kSource + "/scenarios/planar.cfg");
  s.duration = 0.5;
  const ScenarioLog log = run_scenario(s);
  EXPECT_EQ(log.tier, Tier::kPlanar);
  EXPECT_EQ(log.rows.size(), 501u);
  EXPECT_LE(log.summary_value("max_residual"), 1e-6);
  EXPECT_LE(log.summary_value("max_constraint_velocity"), 1e-8);
}

TEST(Outputs, FilesAreWritten) {
  const ScenarioLog log = run_scenario(short_run(0.01));
  const auto dir = std::filesystem::temp_directory_path() / "samwinch_outputs";
  std::filesystem::remove_all(dir);
  const OutputPaths p = emit_outputs(log, dir.string());
  const std::string csv = slurp(p.csv);
  EXPECT_EQ(csv, csv_text(log));
  // One meta line, one header row, then the records.
  std::istringstream in(csv);
  std::string meta, header;
  std::getline(in, meta);
  std::getline(in, header);
  EXPECT_EQ(meta[0], '#');
  EXPECT_EQ(header.rfind("t,ee_x,ee_y,ee_z", 0), 0u);
  EXPECT_EQ(slurp(p.summary), summary_text(log));
  const std::string py = slurp(p.plot);
  EXPECT_NE(py.find("short.csv"), std::string::npos);
  EXPECT_NE(py.find("savefig"), std::string::npos);
}

}  // namespace
}  // namespace sam::harness
