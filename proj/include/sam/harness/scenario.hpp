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

// Scenario files, the simulation loop that wires plant, controller,
// admittance, cable IK and winches together, and the CSV / summary /
// plot-script outputs.

#ifndef SAM_HARNESS_SCENARIO_HPP_
#define SAM_HARNESS_SCENARIO_HPP_

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sam/control/controller.hpp"
#include "sam/core/keyvalue.hpp"
#include "sam/core/params.hpp"
#include "sam/core/targets.hpp"
#include "sam/dynamics/planar.hpp"
#include "sam/dynamics/reduced.hpp"
#include "sam/kinematics/cable.hpp"
#include "sam/kinematics/reduced.hpp"
#include "sam/winch/winch.hpp"

namespace sam::harness {

enum class Tier { kPlanar, k3d };

inline const char* tier_name(Tier t) { return t == Tier::kPlanar ? "planar" : "3d"; }

struct Waypoint {
  double t = 0.0;
  Vector3d offset = Vector3d::Zero();  // end-effector position relative to its start
};

struct PayloadEvent {
  double t = 0.0;
  double mass = 0.0;  // payload carried from t on
};

// Forced validation run of the planar closed-chain model.
struct PlanarSetup {
  double q1 = 0.05;
  double cable_length = 0.9;
  VectorXd arm = (VectorXd(2) << 0.3, -0.5).finished();
  double stiffness = 5000.0;
  Vector2d winch_amplitude{20.0, 15.0};
  VectorXd arm_amplitude = (VectorXd(2) << 1.0, 0.5).finished();
  double frequency = 0.5;
  bool project = false;
};

struct Scenario {
  std::string name;
  std::string params_file;  // empty: built-in defaults
  SystemParams params = default_params();
  Tier tier = Tier::k3d;
  PlantKind plant = PlantKind::kCoupled;  // with winches on; off always locks the platform
  bool winches = true;
  double duration = 0.0;
  double dt = 1e-3;
  std::string output_dir = "out";

  TaskGains gains;
  bool com_task = true;
  bool coriolis_decoupling = true;
  bool effective_inertia = true;
  AdmittanceParams adm;
  WinchParams winch;

  VectorXd arm_home = (VectorXd(7) << 0.0, 0.6, 0.0, -1.2, 0.0, 0.6, 0.0).finished();
  double platform_z = -0.95;
  bool balance = true;  // start with the COM below the hook
  std::vector<Waypoint> waypoints;
  std::vector<PayloadEvent> payload;

  PlanarSetup planar;
};

// Errors with the simulation time at which they occurred.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(double time, const std::string& what)
      : std::runtime_error("t = " + format_double(time) + " s: " + what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// ---------------------------------------------------------------------------
// Schema

namespace detail {

inline std::string on_off(bool b) { return b ? "on" : "off"; }

inline std::string join_numbers(const double* v, Index n) {
  std::string out;
  for (Index i = 0; i < n; ++i) {
    if (i) out += " ";
    out += format_double(v[i]);
  }
  return out;
}

template <typename Derived>
std::string join(const Eigen::MatrixBase<Derived>& v) {
  const VectorXd x = v;
  return join_numbers(x.data(), x.size());
}

}  // namespace detail

// Canonical text form; also what the config hashes are computed from.
inline std::string format_scenario(const Scenario& s, bool with_run_flags = true) {
  using detail::join;
  using detail::on_off;
  std::ostringstream o;
  o << "name = " << s.name << "\n";
  if (!s.params_file.empty()) o << "params = " << s.params_file << "\n";
  o << "tier = " << tier_name(s.tier) << "\n";
  o << "plant = " << plant_name(s.plant) << "\n";
  if (with_run_flags) o << "winches = " << on_off(s.winches) << "\n";
  o << "duration = " << format_double(s.duration) << "\n";
  o << "dt = " << format_double(s.dt) << "\n";
  if (with_run_flags) o << "output = " << s.output_dir << "\n";
  o << "gains.stiffness_ee = " << join(s.gains.stiffness_ee) << "\n";
  o << "gains.damping_ratio_ee = " << format_double(s.gains.damping_ratio_ee) << "\n";
  o << "gains.stiffness_com = " << join(s.gains.stiffness_com) << "\n";
  o << "gains.damping_ratio_com = " << format_double(s.gains.damping_ratio_com) << "\n";
  o << "gains.damping_com = " << join(s.gains.damping_com) << "\n";
  o << "gains.stiffness_elbow = " << format_double(s.gains.stiffness_elbow) << "\n";
  o << "gains.damping_elbow = " << format_double(s.gains.damping_elbow) << "\n";
  o << "task2 = " << on_off(s.com_task) << "\n";
  o << "tau_mu = " << on_off(s.coriolis_decoupling) << "\n";
  o << "effective_inertia = " << on_off(s.effective_inertia) << "\n";
  o << "admittance.mass = " << join(s.adm.mass) << "\n";
  o << "admittance.damping = " << join(s.adm.damping) << "\n";
  o << "winch.time_constant = " << format_double(s.winch.time_constant) << "\n";
  o << "winch.rate_max = " << format_double(s.winch.rate_max) << "\n";
  o << "arm_home = " << join(s.arm_home) << "\n";
  o << "platform_z = " << format_double(s.platform_z) << "\n";
  o << "balance = " << on_off(s.balance) << "\n";
  for (const auto& w : s.waypoints)
    o << "waypoint = " << format_double(w.t) << " " << join(w.offset) << "\n";
  for (const auto& e : s.payload)
    o << "payload = " << format_double(e.t) << " " << format_double(e.mass) << "\n";
  o << "planar.q1 = " << format_double(s.planar.q1) << "\n";
  o << "planar.cable_length = " << format_double(s.planar.cable_length) << "\n";
  o << "planar.arm = " << join(s.planar.arm) << "\n";
  o << "planar.stiffness = " << format_double(s.planar.stiffness) << "\n";
  o << "planar.winch_amplitude = " << join(s.planar.winch_amplitude) << "\n";
  o << "planar.arm_amplitude = " << join(s.planar.arm_amplitude) << "\n";
  o << "planar.frequency = " << format_double(s.planar.frequency) << "\n";
  o << "planar.project = " << on_off(s.planar.project) << "\n";
  return o.str();
}

inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

// Hash over everything that shapes the run, parameters included.
inline std::uint64_t config_hash(const Scenario& s) {
  return fnv1a(format_scenario(s, true) + format_params(s.params));
}
// Same, without the winch flag and output location: equal for A/B runs.
inline std::uint64_t base_hash(const Scenario& s) {
  return fnv1a(format_scenario(s, false) + format_params(s.params));
}

inline Scenario parse_scenario(const KeyValueFile& kv, const std::string& base_dir = ".") {
  Scenario s;
  std::vector<FieldError> errors;
  std::vector<double> v;

  auto text = [&](const std::string& key, std::string& dst, bool required) {
    const auto* e = kv.find(key, errors);
    if (e == nullptr) {
      if (required) errors.push_back({0, key, "missing"});
      return;
    }
    if (e->value.empty()) {
      errors.push_back({e->line, key, "empty value"});
      return;
    }
    dst = e->value;
  };
  auto scalar = [&](const std::string& key, double& dst, bool required = false) {
    const auto* e = kv.find(key, errors);
    if (e == nullptr) {
      if (required) errors.push_back({0, key, "missing"});
      return;
    }
    if (read_numbers(*e, 1, v, errors)) dst = v[0];
  };
  auto vec = [&](const std::string& key, auto& dst, std::size_t n) {
    const auto* e = kv.find(key, errors);
    if (e != nullptr && read_numbers(*e, n, v, errors))
      for (std::size_t i = 0; i < n; ++i) dst[static_cast<Index>(i)] = v[i];
  };
  auto dynvec = [&](const std::string& key, VectorXd& dst) {
    const auto* e = kv.find(key, errors);
    if (e == nullptr) return;
    if (!parse_numbers(e->value, v) || v.empty()) {
      errors.push_back({e->line, key, "expected a list of numbers"});
      return;
    }
    dst = Eigen::Map<VectorXd>(v.data(), static_cast<Index>(v.size()));
  };
  auto flag = [&](const std::string& key, bool& dst) {
    const auto* e = kv.find(key, errors);
    if (e == nullptr) return;
    if (e->value == "on" || e->value == "true") {
      dst = true;
    } else if (e->value == "off" || e->value == "false") {
      dst = false;
    } else {
      errors.push_back({e->line, key, "expected on or off, got '" + e->value + "'"});
    }
  };

  text("name", s.name, true);
  text("params", s.params_file, false);
  std::string tier, plant, out;
  text("tier", tier, false);
  if (!tier.empty()) {
    if (tier == "planar") {
      s.tier = Tier::kPlanar;
    } else if (tier == "3d") {
      s.tier = Tier::k3d;
    } else {
      errors.push_back({kv.all("tier").front()->line, "tier", "expected planar or 3d"});
    }
  }
  text("plant", plant, false);
  if (!plant.empty()) {
    if (plant == "coupled") {
      s.plant = PlantKind::kCoupled;
    } else if (plant == "rigid") {
      s.plant = PlantKind::kRigid;
    } else {
      errors.push_back({kv.all("plant").front()->line, "plant", "expected coupled or rigid"});
    }
  }
  flag("winches", s.winches);
  scalar("duration", s.duration, true);
  scalar("dt", s.dt, true);
  text("output", s.output_dir, false);

  vec("gains.stiffness_ee", s.gains.stiffness_ee, 6);
  scalar("gains.damping_ratio_ee", s.gains.damping_ratio_ee);
  vec("gains.stiffness_com", s.gains.stiffness_com, 3);
  scalar("gains.damping_ratio_com", s.gains.damping_ratio_com);
  vec("gains.damping_com", s.gains.damping_com, 3);
  scalar("gains.stiffness_elbow", s.gains.stiffness_elbow);
  scalar("gains.damping_elbow", s.gains.damping_elbow);
  flag("task2", s.com_task);
  flag("tau_mu", s.coriolis_decoupling);
  flag("effective_inertia", s.effective_inertia);
  vec("admittance.mass", s.adm.mass, 3);
  vec("admittance.damping", s.adm.damping, 3);
  scalar("winch.time_constant", s.winch.time_constant);
  scalar("winch.rate_max", s.winch.rate_max);
  dynvec("arm_home", s.arm_home);
  scalar("platform_z", s.platform_z);
  flag("balance", s.balance);

  for (const auto* e : kv.all("waypoint")) {
    if (read_numbers(*e, 4, v, errors)) s.waypoints.push_back({v[0], Vector3d(v[1], v[2], v[3])});
  }
  for (const auto* e : kv.all("payload")) {
    if (read_numbers(*e, 2, v, errors)) s.payload.push_back({v[0], v[1]});
  }

  scalar("planar.q1", s.planar.q1);
  scalar("planar.cable_length", s.planar.cable_length);
  dynvec("planar.arm", s.planar.arm);
  scalar("planar.stiffness", s.planar.stiffness);
  vec("planar.winch_amplitude", s.planar.winch_amplitude, 2);
  dynvec("planar.arm_amplitude", s.planar.arm_amplitude);
  scalar("planar.frequency", s.planar.frequency);
  flag("planar.project", s.planar.project);

  const std::set<std::string> known = {
      "name", "params", "tier", "plant", "winches", "duration", "dt", "output", "gains.",
      "task2", "tau_mu", "effective_inertia", "admittance.", "winch.", "arm_home", "platform_z",
      "balance", "waypoint", "payload", "planar."};
  for (auto& e : kv.unknown_keys(known)) errors.push_back(e);

  // Parameters first: the arm size checks below depend on them.
  if (!s.params_file.empty()) {
    std::filesystem::path path(s.params_file);
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    try {
      s.params = load_params(path.string());
    } catch (const SchemaError& e) {
      for (const auto& fe : e.errors())
        errors.push_back({fe.line, "params: " + fe.field, fe.message});
    } catch (const std::exception& e) {
      errors.push_back({0, "params", e.what()});
    }
  }

  // Semantic checks.
  auto line_of = [&](const std::string& key) {
    const auto hits = kv.all(key);
    return hits.empty() ? 0 : hits.front()->line;
  };
  if (!(s.dt > 0.0)) errors.push_back({line_of("dt"), "dt", "must be positive"});
  if (!(s.duration >= 0.0)) errors.push_back({line_of("duration"), "duration", "must be non-negative"});
  const auto wp = kv.all("waypoint");
  for (std::size_t i = 0; i < s.waypoints.size(); ++i) {
    const double prev = i == 0 ? 0.0 : s.waypoints[i - 1].t;
    if (!(s.waypoints[i].t > prev))
      errors.push_back({wp[i]->line, "waypoint", "times must be strictly increasing and positive"});
  }
  if (!s.waypoints.empty() && s.duration < s.waypoints.back().t)
    errors.push_back({line_of("duration"), "duration", "shorter than the last waypoint time"});
  const auto pl = kv.all("payload");
  for (std::size_t i = 0; i < s.payload.size(); ++i) {
    if (s.payload[i].mass < 0.0) errors.push_back({pl[i]->line, "payload", "mass must be non-negative"});
    if (s.payload[i].t < 0.0 || (i > 0 && s.payload[i].t < s.payload[i - 1].t))
      errors.push_back({pl[i]->line, "payload", "event times must be non-negative and ordered"});
  }
  for (const auto& m : validate_gains(s.gains)) errors.push_back({0, "gains", m});
  if (!s.adm.valid()) errors.push_back({line_of("admittance.mass"), "admittance", "entries must be positive"});
  if (!(s.winch.time_constant >= 0.0))
    errors.push_back({line_of("winch.time_constant"), "winch.time_constant", "must be non-negative"});
  if (!(s.winch.rate_max > 0.0))
    errors.push_back({line_of("winch.rate_max"), "winch.rate_max", "must be positive"});
  if (s.arm_home.size() != s.params.arm_dof())
    errors.push_back({line_of("arm_home"), "arm_home",
                      "expected " + std::to_string(s.params.arm_dof()) + " joint values"});
  if (s.planar.arm.size() != s.params.planar_arm_dof())
    errors.push_back({line_of("planar.arm"), "planar.arm",
                      "expected " + std::to_string(s.params.planar_arm_dof()) + " joint values"});
  if (s.planar.arm_amplitude.size() != s.params.planar_arm_dof())
    errors.push_back({line_of("planar.arm_amplitude"), "planar.arm_amplitude",
                      "expected " + std::to_string(s.params.planar_arm_dof()) + " values"});
  if (!errors.empty()) throw SchemaError(errors);
  s.winch.length_min = s.params.cable_length_min;
  s.winch.length_max = s.params.cable_length_max;
  return s;
}

inline Scenario parse_scenario(const std::string& text, const std::string& base_dir = ".") {
  return parse_scenario(KeyValueFile::parse(text), base_dir);
}

inline Scenario load_scenario(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_scenario(KeyValueFile::load(path), dir.empty() ? "." : dir.string());
}

// End-effector offset at time t: smoothstep from each waypoint to the next,
// starting from zero at t = 0 and holding after the last one.
inline Vector3d waypoint_offset(const std::vector<Waypoint>& w, double t) {
  Vector3d from = Vector3d::Zero();
  double t0 = 0.0;
  for (const auto& p : w) {
    if (t < p.t) {
      const double s = std::clamp((t - t0) / (p.t - t0), 0.0, 1.0);
      return from + (p.offset - from) * (s * s * (3.0 - 2.0 * s));
    }
    from = p.offset;
    t0 = p.t;
  }
  return from;
}

// ---------------------------------------------------------------------------
// Logs

using Summary = std::vector<std::pair<std::string, double>>;

struct ScenarioLog {
  std::string name;
  Tier tier = Tier::k3d;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  Summary summary;
  std::string config_hash;
  std::string base_hash;

  // Column index by name; throws for unknown names.
  std::size_t column(const std::string& c) const {
    const auto it = std::find(columns.begin(), columns.end(), c);
    if (it == columns.end()) throw std::out_of_range("no column '" + c + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
  std::vector<double> series(const std::string& c) const {
    const std::size_t k = column(c);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
  }
  double summary_value(const std::string& key) const {
    for (const auto& [k, v] : summary)
      if (k == key) return v;
    throw std::out_of_range("no summary entry '" + key + "'");
  }
};

inline constexpr double kSteadyWindow = 1.0;  // s, tail used for steady-state values

inline Summary summarize(const ScenarioLog& log) {
  Summary s;
  const std::size_t n = log.rows.size();
  s.push_back({"records", static_cast<double>(n)});
  if (n == 0) return s;
  const auto t = log.series("t");
  const double t_end = t.back();
  if (log.tier == Tier::kPlanar) {
    const auto res = log.series("residual");
    const auto av = log.series("constraint_velocity");
    const auto e = log.series("energy");
    double rmax = 0.0, vmax = 0.0, emax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rmax = std::max(rmax, res[i]);
      vmax = std::max(vmax, av[i]);
      emax = std::max(emax, std::abs(e[i] - e[0]));
    }
    s.push_back({"max_residual", rmax});
    s.push_back({"max_constraint_velocity", vmax});
    s.push_back({"energy_drift_relative", e[0] != 0.0 ? emax / std::abs(e[0]) : emax});
    return s;
  }
  const auto cx = log.series("com_x");
  const auto cy = log.series("com_y");
  const auto ee = log.series("ee_error");
  double mx = 0.0, my = 0.0, sx = 0.0, sy = 0.0, see = 0.0, eemax = 0.0;
  double ssx = 0.0, ssy = 0.0, ssh = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx = std::max(mx, std::abs(cx[i]));
    my = std::max(my, std::abs(cy[i]));
    sx += cx[i] * cx[i];
    sy += cy[i] * cy[i];
    see += ee[i] * ee[i];
    eemax = std::max(eemax, ee[i]);
    if (t[i] >= t_end - kSteadyWindow) {
      ssx = std::max(ssx, std::abs(cx[i]));
      ssy = std::max(ssy, std::abs(cy[i]));
      ssh = std::max(ssh, std::hypot(cx[i], cy[i]));
    }
  }
  const double dn = static_cast<double>(n);
  s.push_back({"max_abs_com_x", mx});
  s.push_back({"max_abs_com_y", my});
  s.push_back({"rmse_com_x", std::sqrt(sx / dn)});
  s.push_back({"rmse_com_y", std::sqrt(sy / dn)});
  s.push_back({"rmse_com_horizontal", std::sqrt((sx + sy) / dn)});
  s.push_back({"steady_abs_com_x", ssx});
  s.push_back({"steady_abs_com_y", ssy});
  s.push_back({"steady_com_horizontal", ssh});
  s.push_back({"ee_rms_error", std::sqrt(see / dn)});
  s.push_back({"ee_max_error", eemax});
  return s;
}

// ---------------------------------------------------------------------------
// Runs

struct Initial3d {
  VectorXd gamma;
  Pose ee;
  Vector3d com;
};

inline Initial3d initial_state(const Scenario& s) {
  const SystemParams& p = s.params;
  VectorXd g(p.gamma_dim());
  g << 0.0, 0.0, s.platform_z, s.arm_home;
  if (s.balance) {
    // The COM moves one-to-one with the platform.
    const Vector3d c = fk_com<double>(g, p);
    g[0] -= c.x();
    g[1] -= c.y();
  }
  return {g, fk_end_effector(g, p), fk_com<double>(g, p)};
}

inline std::vector<std::string> columns_3d(int arm_dof) {
  std::vector<std::string> c = {"t",        "ee_x",     "ee_y",     "ee_z",     "ee_des_x",
                                "ee_des_y", "ee_des_z", "ee_error", "ee_rot_error", "com_x",
                                "com_y",    "com_z",    "xp_x",     "xp_y",     "xp_z",
                                "xp_des_x", "xp_des_y", "xp_des_z", "xp_meas_x", "xp_meas_y",
                                "xp_meas_z", "l1",      "l2",       "l3",       "l_des1",
                                "l_des2",   "l_des3",   "winch_limit", "tau_p_x", "tau_p_y",
                                "tau_p_z"};
  for (int i = 0; i < arm_dof; ++i) c.push_back("tau_m" + std::to_string(i + 1));
  for (int i = 0; i < arm_dof; ++i) c.push_back("q_m" + std::to_string(i + 1));
  c.push_back("energy");
  c.push_back("payload");
  return c;
}

inline ScenarioLog run_3d(const Scenario& s) {
  SystemParams p = s.params;
  const Index n = p.gamma_dim();
  const std::size_t steps = step_count(s.duration, s.dt);
  const Initial3d init = initial_state(s);

  const bool admittance = s.winches && s.plant == PlantKind::kCoupled;
  const PlantKind kind = s.winches ? s.plant : PlantKind::kLocked;
  control::ControlOptions opt;
  opt.com_task = s.com_task;
  opt.coriolis_decoupling = s.coriolis_decoupling;
  opt.admittance = admittance;
  opt.effective_inertia = s.effective_inertia;
  opt.adm = s.adm;

  TaskTargets targets;
  targets.ee = init.ee;
  targets.com = Vector3d(0.0, 0.0, init.com.z());
  targets.elbow = init.gamma[3 + p.elbow_joint];
  targets.gains = s.gains;

  control::WholeBodyController ctrl(p, targets, opt);
  ctrl.reset_admittance(init.gamma.head<3>());
  ReducedPlant plant(p, kind, s.adm);

  WinchState winch;
  try {
    winch = winch_at(init.gamma.head<3>(), p);
  } catch (const CableRangeError& e) {
    throw ScenarioError(0.0, std::string("initial platform position infeasible: ") + e.what());
  }

  ScenarioLog log;
  log.name = s.name;
  log.tier = Tier::k3d;
  log.columns = columns_3d(p.arm_dof());
  log.rows.reserve(steps + 1);

  VectorXd x(2 * n);
  x << init.gamma, VectorXd::Zero(n);
  Vector3d l_des = winch.lengths;
  std::size_t next_event = 0;

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * s.dt;
    bool params_changed = false;
    while (next_event < s.payload.size() && s.payload[next_event].t <= t + 1e-12) {
      p.payload_mass = s.payload[next_event++].mass;
      params_changed = true;
    }
    if (params_changed) {
      plant.set_params(p);
      ctrl.set_params(p);
    }
    TaskTargets tk = targets;
    tk.ee.position = init.ee.position + waypoint_offset(s.waypoints, t);
    ctrl.set_targets(tk);

    const ReducedState state{x.head(n), x.tail(n)};
    control::ControlOutput u;
    try {
      u = ctrl.compute(state);
    } catch (const SingularityError& e) {
      throw ScenarioError(t, e.what());
    }

    // Log the sample.
    const Pose ee = fk_end_effector(state.gamma, p);
    const Vector3d com = fk_com<double>(state.gamma, p);
    const Vector3d xp_des = admittance ? ctrl.admittance_state().position : Vector3d(state.platform());
    Vector3d xp_meas;
    try {
      xp_meas = cable_fk(winch.lengths, p);
    } catch (const std::exception& e) {
      throw ScenarioError(t, std::string("cable forward kinematics: ") + e.what());
    }
    std::vector<double> row;
    row.reserve(log.columns.size());
    row.push_back(t);
    for (int i = 0; i < 3; ++i) row.push_back(ee.position[i]);
    for (int i = 0; i < 3; ++i) row.push_back(tk.ee.position[i]);
    row.push_back(u.error_ee.head<3>().norm());
    row.push_back(u.error_ee.tail<3>().norm());
    for (int i = 0; i < 3; ++i) row.push_back(com[i]);
    for (int i = 0; i < 3; ++i) row.push_back(state.gamma[i]);
    for (int i = 0; i < 3; ++i) row.push_back(xp_des[i]);
    for (int i = 0; i < 3; ++i) row.push_back(xp_meas[i]);
    for (int i = 0; i < 3; ++i) row.push_back(winch.lengths[i]);
    for (int i = 0; i < 3; ++i) row.push_back(l_des[i]);
    row.push_back(static_cast<double>(winch.limit_flags[0] + winch.limit_flags[1] + winch.limit_flags[2]));
    for (int i = 0; i < 3; ++i) row.push_back(u.tau[i]);
    for (Index i = 3; i < n; ++i) row.push_back(u.tau[i]);
    for (Index i = 3; i < n; ++i) row.push_back(state.gamma[i]);
    row.push_back(plant.diagnostics(t, x).energy);
    row.push_back(p.payload_mass);
    log.rows.push_back(std::move(row));
    if (k == steps) break;

    // Advance one control period.
    plant.set_torque(u.tau);
    x = rk4_step(plant, t, x, s.dt);
    ctrl.advance(u, s.dt);
    if (admittance) {
      // High-gain winch servos realize the admittance output.
      x.head<3>() = ctrl.admittance_state().position;
      x.segment<3>(n) = ctrl.admittance_state().velocity;
    }
    const double t1 = static_cast<double>(k + 1) * s.dt;
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e6)
      throw ScenarioError(t1, "state diverged");
    if (s.winches) {
      const FeasibilityReport rep = feasibility_report(x.head<3>(), p);
      if (!rep.ok()) throw ScenarioError(t1, "platform command infeasible: " + rep.describe());
      l_des = rep.lengths;
      winch = servo_track(l_des, winch, s.dt, s.winch);
    }
  }
  log.summary = summarize(log);
  return log;
}

inline ScenarioLog run_planar(const Scenario& s) {
  const SystemParams& p = s.params;
  const Index dof = planar::dof(p);
  const VectorXd eta = planar::symmetric_eta(p, s.planar.cable_length, s.planar.arm, s.planar.q1);
  const ClosedChainState cs = planar::closed_chain_from_eta(eta, VectorXd::Zero(eta.size()), p);
  planar::WinchSpringExcitation w;
  w.stiffness = s.planar.stiffness;
  w.rest_length = Vector2d(cs.q[kQ3], cs.q[kQ6]);
  w.frequency = s.planar.frequency;
  if (s.winches) w.winch_amplitude = s.planar.winch_amplitude;
  w.arm_amplitude = s.planar.arm_amplitude;
  const planar::ClosedChainSystem sys(p, planar::make_inputs(w, dof));
  IntegrationOptions opt;
  opt.dt = s.dt;
  opt.horizon = s.duration;
  opt.project = s.planar.project;
  VectorXd x0(2 * dof);
  x0 << cs.q, cs.qdot;
  Trajectory traj;
  try {
    traj = integrate(sys, x0, opt);
  } catch (const DivergenceError& e) {
    throw ScenarioError(e.time(), e.what());
  }

  ScenarioLog log;
  log.name = s.name;
  log.tier = Tier::kPlanar;
  log.columns = {"t"};
  for (Index i = 0; i < dof; ++i) log.columns.push_back("q" + std::to_string(i + 1));
  for (const char* c : {"x_c", "y_c", "com_x", "com_y", "residual", "constraint_velocity",
                        "residual_before_projection", "energy"})
    log.columns.push_back(c);
  const planar::Tree tree = planar::build_tree(p);
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    const VectorXd q = traj.x[k].head(dof);
    const VectorXd e = planar::eta_from_q<double>(q, p);
    const Vector2d com = planar::center_of_mass<double>(tree, q);
    std::vector<double> row = {traj.t[k]};
    for (Index i = 0; i < dof; ++i) row.push_back(q[i]);
    row.push_back(e[1]);
    row.push_back(e[3]);
    row.push_back(com.x());
    row.push_back(com.y());
    row.push_back(traj.diagnostics[k].residual);
    row.push_back(traj.diagnostics[k].constraint_velocity);
    row.push_back(traj.pre_projection[k].residual);
    row.push_back(traj.diagnostics[k].energy);
    log.rows.push_back(std::move(row));
  }
  log.summary = summarize(log);
  return log;
}

inline ScenarioLog run_scenario(const Scenario& s) {
  ScenarioLog log = s.tier == Tier::kPlanar ? run_planar(s) : run_3d(s);
  log.config_hash = hex64(config_hash(s));
  log.base_hash = hex64(base_hash(s));
  return log;
}

// ---------------------------------------------------------------------------
// Outputs

inline std::string csv_text(const ScenarioLog& log) {
  std::string out = "# scenario=" + log.name + " tier=" + tier_name(log.tier) +
                    " config_hash=" + log.config_hash + " base_hash=" + log.base_hash + "\n";
  for (std::size_t i = 0; i < log.columns.size(); ++i) {
    if (i) out += ",";
    out += log.columns[i];
  }
  out += "\n";
  for (const auto& r : log.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ",";
      out += format_double(r[i]);
    }
    out += "\n";
  }
  return out;
}

inline std::string summary_text(const ScenarioLog& log) {
  std::string out = "scenario = " + log.name + "\ntier = " + tier_name(log.tier) +
                    "\nconfig_hash = " + log.config_hash + "\nbase_hash = " + log.base_hash + "\n";
  for (const auto& [k, v] : log.summary) out += k + " = " + format_double(v) + "\n";
  return out;
}

// Reads a CSV written by csv_text back into a log and recomputes its summary.
inline ScenarioLog read_csv(const std::string& text) {
  ScenarioLog log;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string tok;
      while (meta >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
        if (k == "scenario") log.name = v;
        if (k == "tier") log.tier = v == "planar" ? Tier::kPlanar : Tier::k3d;
        if (k == "config_hash") log.config_hash = v;
        if (k == "base_hash") log.base_hash = v;
      }
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!header) {
      log.columns = cells;
      header = true;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
    if (row.size() != log.columns.size()) throw std::runtime_error("read_csv: ragged row");
    log.rows.push_back(std::move(row));
  }
  log.summary = summarize(log);
  return log;
}

inline std::string plot_script(const ScenarioLog& log, const std::string& csv_name) {
  std::string py;
  py += "# Regenerates the figure panels from " + csv_name + ".\n";
  py += "import os\nimport numpy as np\nimport matplotlib\nmatplotlib.use('Agg')\n";
  py += "import matplotlib.pyplot as plt\n\n";
  py += "here = os.path.dirname(os.path.abspath(__file__))\n";
  py += "d = np.genfromtxt(os.path.join(here, '" + csv_name +
        "'), delimiter=',', names=True, skip_header=1)\n";
  py += "t = d['t']\n";
  if (log.tier == Tier::kPlanar) {
    py += "fig, ax = plt.subplots(3, 1, sharex=True, figsize=(8, 8))\n";
    py += "ax[0].plot(t, d['x_c'], label='x_c'); ax[0].plot(t, d['y_c'], label='y_c')\n";
    py += "ax[0].set_ylabel('platform [m]'); ax[0].legend()\n";
    py += "ax[1].semilogy(t, np.maximum(d['residual'], 1e-18), label='closure residual')\n";
    py += "ax[1].semilogy(t, np.maximum(d['constraint_velocity'], 1e-18), label='|A qdot|')\n";
    py += "ax[1].legend()\n";
    py += "ax[2].plot(t, d['energy'] - d['energy'][0]); ax[2].set_ylabel('energy change [J]')\n";
  } else {
    py += "fig, ax = plt.subplots(4, 1, sharex=True, figsize=(8, 11))\n";
    py += "for c in 'xyz':\n";
    py += "    ax[0].plot(t, d['ee_' + c], label='ee ' + c)\n";
    py += "    ax[0].plot(t, d['ee_des_' + c], '--', label='desired ' + c)\n";
    py += "ax[0].set_ylabel('end-effector [m]'); ax[0].legend(ncol=3, fontsize=7)\n";
    py += "ax[1].plot(t, 1e3 * d['com_x'], label='x_com'); ax[1].plot(t, 1e3 * d['com_y'], label='y_com')\n";
    py += "ax[1].set_ylabel('COM [mm]'); ax[1].legend()\n";
    py += "for c in 'xyz':\n";
    py += "    ax[2].plot(t, d['xp_des_' + c] - d['xp_des_' + c][0], label='command ' + c)\n";
    py += "    ax[2].plot(t, d['xp_meas_' + c] - d['xp_meas_' + c][0], '--', label='cables ' + c)\n";
    py += "ax[2].set_ylabel('platform shift [m]'); ax[2].legend(ncol=3, fontsize=7)\n";
    py += "for i in (1, 2, 3):\n";
    py += "    ax[3].plot(t, d['l%d' % i], label='cable %d' % i)\n";
    py += "ax[3].set_ylabel('cable length [m]'); ax[3].legend()\n";
  }
  py += "ax[-1].set_xlabel('t [s]')\nfig.tight_layout()\n";
  py += "fig.savefig(os.path.join(here, '" + log.name + ".png'), dpi=120)\n";
  return py;
}

struct OutputPaths {
  std::string csv, summary, plot;
};

inline OutputPaths emit_outputs(const ScenarioLog& log, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  OutputPaths paths{(base / (log.name + ".csv")).string(),
                    (base / (log.name + "_summary.txt")).string(),
                    (base / ("plot_" + log.name + ".py")).string()};
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
  };
  write(paths.csv, csv_text(log));
  write(paths.summary, summary_text(log));
  write(paths.plot, plot_script(log, log.name + ".csv"));
  return paths;
}

}  // namespace sam::harness

#endif  // SAM_HARNESS_SCENARIO_HPP_
