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

// Physical parameters of the crane-suspended platform, its three rigging
// cables and the serial manipulator hanging below it.
//
// Frames. The 3D control model is expressed in a frame centred at the crane
// hook A with z up; the platform translates without rotating. The planar
// validation model lives in the x/y plane of a frame centred at the crane jib
// tip O with y up; angles are measured from the downward vertical.
//
// Except for the cable length range, every default below is an engineering
// estimate chosen for a plausible platform with a 7-DOF lightweight arm. None
// of them is a measured value of a real system.

#ifndef SAM_CORE_PARAMS_HPP_
#define SAM_CORE_PARAMS_HPP_

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "sam/core/common.hpp"
#include "sam/core/keyvalue.hpp"

namespace sam {

using Eigen::Matrix3d;

// One revolute joint of the 3D arm and the link it drives.
struct ArmJoint {
  Vector3d origin = Vector3d::Zero();  // previous joint frame -> this joint, before rotation
  Vector3d axis = Vector3d::UnitZ();   // unit axis in the joint frame
  double mass = 1.0;
  Vector3d com = Vector3d::Zero();    // link COM in the rotated joint frame
  Matrix3d inertia = Matrix3d::Identity() * 1e-2;  // about the COM, joint frame
};

// One link of the planar validation arm; rotates about the plane normal.
struct PlanarLink {
  double length = 0.3;
  double mass = 1.0;
  double com = 0.15;  // distance from the proximal joint along the link
  double inertia = 1e-2;
};

struct PlanarGeometry {
  double cable_tip_mass = 0.2;  // clamp at each cable tip; keeps the cut tree's inertia regular
  Vector2d attach_b{-0.3, 0.1};   // cable 1 tip B, platform frame, relative to C
  Vector2d attach_e{0.3, 0.1};    // cable 2 tip E
  Vector2d arm_mount{0.0, -0.12};  // D
  double platform_inertia = 1.2;
  std::vector<PlanarLink> arm;
};

struct SystemParams {
  double l1 = 1.0;  // crane chain OA
  double m1 = 5.0;  // hook, concentrated at A
  double platform_mass = 30.0;
  Matrix3d platform_inertia = Vector3d(1.2, 1.2, 2.0).asDiagonal();
  std::array<Vector3d, 3> cable_attach{};  // W_i relative to C, platform frame
  Vector3d arm_mount{0.0, 0.0, -0.12};      // D relative to C
  Matrix3d arm_mount_rotation = Matrix3d::Identity();
  std::vector<ArmJoint> arm;
  Vector3d flange{0.0, 0.0, 0.078};  // end-effector frame in the last joint frame
  double payload_mass = 0.0;         // point mass at the end-effector
  int elbow_joint = 2;               // arm joint damped by the lowest-priority task
  double cable_length_min = 0.5;
  double cable_length_max = 1.3;
  double gravity = 9.81;
  PlanarGeometry planar;

  int arm_dof() const { return static_cast<int>(arm.size()); }
  int gamma_dim() const { return 3 + arm_dof(); }
  int planar_arm_dof() const { return static_cast<int>(planar.arm.size()); }
  // Platform, arm and payload; the hook is carried by the crane chain.
  double suspended_mass() const {
    double m = platform_mass + payload_mass;
    for (const auto& j : arm) m += j.mass;
    return m;
  }
};

inline Matrix3d rotation_x(double a) {
  return Eigen::AngleAxisd(a, Vector3d::UnitX()).toRotationMatrix();
}

// Reference configuration: 30 kg platform with three cables attached on a
// 0.3 m circle and a 14 kg, LWR-like arm mounted upside down below it.
inline SystemParams default_params() {
  SystemParams p;
  constexpr double kPi = 3.14159265358979323846;
  for (int i = 0; i < 3; ++i) {
    const double phi = 2.0 * kPi * i / 3.0;
    p.cable_attach[i] = Vector3d(0.3 * std::cos(phi), 0.3 * std::sin(phi), 0.1);
  }
  p.arm_mount_rotation = rotation_x(kPi);
  struct Row {
    double dz, mass, com_z;
    char axis;
  };
  const Row rows[] = {{0.1105, 2.7, 0.10, 'z'}, {0.20, 2.7, 0.10, 'y'}, {0.20, 2.5, 0.10, 'z'},
                      {0.20, 2.5, 0.10, 'y'},   {0.19, 1.7, 0.10, 'z'}, {0.20, 1.6, 0.02, 'y'},
                      {0.00, 0.3, 0.04, 'z'}};
  for (const auto& r : rows) {
    ArmJoint j;
    j.origin = Vector3d(0.0, 0.0, r.dz);
    j.axis = r.axis == 'z' ? Vector3d::UnitZ() : Vector3d::UnitY();
    j.mass = r.mass;
    j.com = Vector3d(0.0, 0.0, r.com_z);
    // Solid cylinder, radius 0.06 m, length 0.2 m.
    const double ixx = r.mass * (3.0 * 0.06 * 0.06 + 0.2 * 0.2) / 12.0;
    const double izz = r.mass * 0.06 * 0.06 / 2.0;
    j.inertia = Vector3d(ixx, ixx, izz).asDiagonal();
    p.arm.push_back(j);
  }
  p.planar.arm = {PlanarLink{0.40, 4.0, 0.20, 4.0 * 0.40 * 0.40 / 12.0},
                  PlanarLink{0.35, 3.0, 0.175, 3.0 * 0.35 * 0.35 / 12.0}};
  return p;
}

struct ParamIssue {
  std::string field;
  std::string message;
};

namespace detail {

inline bool spd(const Matrix3d& m) {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff()))
    return false;
  Eigen::SelfAdjointEigenSolver<Matrix3d> es(m);
  return es.eigenvalues().minCoeff() > 0.0;
}

}  // namespace detail

// Lists every violated invariant; empty means the parameters are usable.
inline std::vector<ParamIssue> validate_params(const SystemParams& p) {
  std::vector<ParamIssue> out;
  auto positive = [&](double v, const std::string& field) {
    if (!(v > 0.0) || !std::isfinite(v)) out.push_back({field, "must be strictly positive"});
  };
  positive(p.l1, "l1");
  positive(p.m1, "m1");
  positive(p.platform_mass, "platform_mass");
  positive(p.gravity, "gravity");
  positive(p.cable_length_min, "cable_length_min");
  positive(p.cable_length_max, "cable_length_max");
  if (!(p.payload_mass >= 0.0)) out.push_back({"payload_mass", "must be non-negative"});
  if (!detail::spd(p.platform_inertia))
    out.push_back({"platform_inertia", "must be symmetric positive definite"});
  if (!(p.cable_length_min < p.cable_length_max))
    out.push_back({"cable_length_min", "length ordering: min must be below max"});
  const Vector3d n = (p.cable_attach[1] - p.cable_attach[0])
                         .cross(p.cable_attach[2] - p.cable_attach[0]);
  if (n.norm() < 1e-9) out.push_back({"cable_attach", "attachment degenerate: points are collinear"});
  if (!p.arm_mount_rotation.isUnitary(1e-9) || p.arm_mount_rotation.determinant() < 0.0)
    out.push_back({"arm_mount_rotation", "must be a rotation matrix"});
  if (p.arm.empty()) out.push_back({"arm", "needs at least one joint"});
  for (std::size_t i = 0; i < p.arm.size(); ++i) {
    const auto& j = p.arm[i];
    const std::string f = "arm." + std::to_string(i);
    positive(j.mass, f + ".mass");
    if (std::abs(j.axis.norm() - 1.0) > 1e-9) out.push_back({f + ".axis", "must be a unit vector"});
    if (!detail::spd(j.inertia)) out.push_back({f + ".inertia", "must be symmetric positive definite"});
  }
  if (p.elbow_joint < 0 || p.elbow_joint >= p.arm_dof())
    out.push_back({"elbow_joint", "must index an arm joint"});

  const auto& g = p.planar;
  positive(g.cable_tip_mass, "planar.cable_tip_mass");
  positive(g.platform_inertia, "planar.platform_inertia");
  if ((g.attach_b - g.attach_e).norm() < 1e-9)
    out.push_back({"planar.attach_e", "attachment degenerate: cable tips coincide"});
  if (g.arm.empty()) out.push_back({"planar.arm", "needs at least one link"});
  for (std::size_t i = 0; i < g.arm.size(); ++i) {
    const std::string f = "planar.arm." + std::to_string(i);
    positive(g.arm[i].length, f + ".length");
    positive(g.arm[i].mass, f + ".mass");
    positive(g.arm[i].inertia, f + ".inertia");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parameter files. Every key is optional and overrides the default. Vectors
// are whitespace separated; inertias are given as a full row-major 3x3 or as
// three principal moments. `arm.count` / `planar.arm.count` resize the chains.

inline std::string format_params(const SystemParams& p) {
  std::string out;
  auto line = [&](const std::string& key, std::initializer_list<double> v) {
    out += key + " =";
    for (double x : v) out += " " + format_double(x);
    out += "\n";
  };
  auto vec3 = [&](const std::string& key, const Vector3d& v) { line(key, {v.x(), v.y(), v.z()}); };
  auto mat3 = [&](const std::string& key, const Matrix3d& m) {
    line(key, {m(0, 0), m(0, 1), m(0, 2), m(1, 0), m(1, 1), m(1, 2), m(2, 0), m(2, 1), m(2, 2)});
  };
  line("l1", {p.l1});
  line("m1", {p.m1});
  line("platform_mass", {p.platform_mass});
  mat3("platform_inertia", p.platform_inertia);
  for (int i = 0; i < 3; ++i) vec3("cable_attach." + std::to_string(i), p.cable_attach[i]);
  vec3("arm_mount", p.arm_mount);
  mat3("arm_mount_rotation", p.arm_mount_rotation);
  line("arm.count", {static_cast<double>(p.arm.size())});
  for (std::size_t i = 0; i < p.arm.size(); ++i) {
    const std::string f = "arm." + std::to_string(i) + ".";
    vec3(f + "origin", p.arm[i].origin);
    vec3(f + "axis", p.arm[i].axis);
    line(f + "mass", {p.arm[i].mass});
    vec3(f + "com", p.arm[i].com);
    mat3(f + "inertia", p.arm[i].inertia);
  }
  vec3("flange", p.flange);
  line("payload_mass", {p.payload_mass});
  line("elbow_joint", {static_cast<double>(p.elbow_joint)});
  line("cable_length_min", {p.cable_length_min});
  line("cable_length_max", {p.cable_length_max});
  line("gravity", {p.gravity});
  line("planar.cable_tip_mass", {p.planar.cable_tip_mass});
  line("planar.attach_b", {p.planar.attach_b.x(), p.planar.attach_b.y()});
  line("planar.attach_e", {p.planar.attach_e.x(), p.planar.attach_e.y()});
  line("planar.arm_mount", {p.planar.arm_mount.x(), p.planar.arm_mount.y()});
  line("planar.platform_inertia", {p.planar.platform_inertia});
  line("planar.arm.count", {static_cast<double>(p.planar.arm.size())});
  for (std::size_t i = 0; i < p.planar.arm.size(); ++i) {
    const std::string f = "planar.arm." + std::to_string(i) + ".";
    const auto& l = p.planar.arm[i];
    line(f + "length", {l.length});
    line(f + "mass", {l.mass});
    line(f + "com", {l.com});
    line(f + "inertia", {l.inertia});
  }
  return out;
}

inline SystemParams parse_params(const KeyValueFile& kv) {
  SystemParams p = default_params();
  std::vector<FieldError> errors;
  std::vector<double> v;

  auto get = [&](const std::string& key, std::size_t n) -> bool {
    const auto* e = kv.find(key, errors);
    return e != nullptr && read_numbers(*e, n, v, errors);
  };
  auto scalar = [&](const std::string& key, double& dst) {
    if (get(key, 1)) dst = v[0];
  };
  auto vec3 = [&](const std::string& key, Vector3d& dst) {
    if (get(key, 3)) dst = Vector3d(v[0], v[1], v[2]);
  };
  auto vec2 = [&](const std::string& key, Vector2d& dst) {
    if (get(key, 2)) dst = Vector2d(v[0], v[1]);
  };
  auto mat3 = [&](const std::string& key, Matrix3d& dst) {
    const auto* e = kv.find(key, errors);
    if (e == nullptr) return;
    if (!parse_numbers(e->value, v)) {
      errors.push_back({e->line, key, "not a number: '" + e->value + "'"});
    } else if (v.size() == 3) {
      dst = Vector3d(v[0], v[1], v[2]).asDiagonal();
    } else if (v.size() == 9) {
      dst << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
    } else {
      errors.push_back({e->line, key, "expected 3 or 9 numbers"});
    }
  };
  auto count = [&](const std::string& key, std::size_t current) -> std::size_t {
    double c = static_cast<double>(current);
    scalar(key, c);
    if (c < 0 || c != std::floor(c) || c > 64) {
      errors.push_back({0, key, "must be a small non-negative integer"});
      return current;
    }
    return static_cast<std::size_t>(c);
  };

  scalar("l1", p.l1);
  scalar("m1", p.m1);
  scalar("platform_mass", p.platform_mass);
  mat3("platform_inertia", p.platform_inertia);
  for (int i = 0; i < 3; ++i) vec3("cable_attach." + std::to_string(i), p.cable_attach[i]);
  vec3("arm_mount", p.arm_mount);
  mat3("arm_mount_rotation", p.arm_mount_rotation);
  p.arm.resize(count("arm.count", p.arm.size()));
  for (std::size_t i = 0; i < p.arm.size(); ++i) {
    const std::string f = "arm." + std::to_string(i) + ".";
    vec3(f + "origin", p.arm[i].origin);
    vec3(f + "axis", p.arm[i].axis);
    scalar(f + "mass", p.arm[i].mass);
    vec3(f + "com", p.arm[i].com);
    mat3(f + "inertia", p.arm[i].inertia);
  }
  vec3("flange", p.flange);
  scalar("payload_mass", p.payload_mass);
  double elbow = p.elbow_joint;
  scalar("elbow_joint", elbow);
  p.elbow_joint = static_cast<int>(elbow);
  scalar("cable_length_min", p.cable_length_min);
  scalar("cable_length_max", p.cable_length_max);
  scalar("gravity", p.gravity);
  scalar("planar.cable_tip_mass", p.planar.cable_tip_mass);
  vec2("planar.attach_b", p.planar.attach_b);
  vec2("planar.attach_e", p.planar.attach_e);
  vec2("planar.arm_mount", p.planar.arm_mount);
  scalar("planar.platform_inertia", p.planar.platform_inertia);
  p.planar.arm.resize(count("planar.arm.count", p.planar.arm.size()));
  for (std::size_t i = 0; i < p.planar.arm.size(); ++i) {
    const std::string f = "planar.arm." + std::to_string(i) + ".";
    scalar(f + "length", p.planar.arm[i].length);
    scalar(f + "mass", p.planar.arm[i].mass);
    scalar(f + "com", p.planar.arm[i].com);
    scalar(f + "inertia", p.planar.arm[i].inertia);
  }

  const std::set<std::string> known = {
      "l1", "m1", "platform_mass", "platform_inertia", "cable_attach.", "arm_mount",
      "arm_mount_rotation", "arm.", "flange", "payload_mass", "elbow_joint",
      "cable_length_min", "cable_length_max", "gravity", "planar."};
  for (auto& e : kv.unknown_keys(known)) errors.push_back(e);
  for (const auto& issue : validate_params(p)) errors.push_back({0, issue.field, issue.message});
  if (!errors.empty()) throw SchemaError(errors);
  return p;
}

inline SystemParams parse_params(const std::string& text) {
  return parse_params(KeyValueFile::parse(text));
}

inline SystemParams load_params(const std::string& path) {
  return parse_params(KeyValueFile::load(path));
}

// ---------------------------------------------------------------------------
// State types.

// Planar closed-chain coordinates, in this order.
enum PlanarCoord : Index {
  kQ1 = 0,  // crane chain angle
  kQ2 = 1,  // cable 1 angle relative to the chain (at A)
  kQ3 = 2,  // cable 1 length
  kQ4 = 3,  // platform angle, absolute
  kQ5 = 4,  // cable 2 angle relative to the chain (at A)
  kQ6 = 5,  // cable 2 length
  kQArm = 6,
};

struct ClosedChainState {
  VectorXd q;     // [q1 ... q6, q_m], size 6 + m
  VectorXd qdot;
};

// delta = [q1, q3, q4, q6, q_m] (independent subset of q);
// eta = [q1, x_c, q4, y_c, q_m] (platform pose instead of cable lengths).
struct IndependentState {
  VectorXd delta, delta_dot;
  VectorXd eta, eta_dot;
};

// gamma = [x_c, y_c, z_c, q_m]: platform position relative to the hook, arm joints.
struct ReducedState {
  VectorXd gamma;
  VectorXd gamma_dot;

  Vector3d platform() const { return gamma.head<3>(); }
  Vector3d platform_velocity() const { return gamma_dot.head<3>(); }
  VectorXd arm() const { return gamma.tail(gamma.size() - 3); }
  VectorXd arm_velocity() const { return gamma_dot.tail(gamma_dot.size() - 3); }
};

struct AdmittanceParams {
  Vector3d mass = Vector3d::Constant(0.8);     // diagonal of M_adm, kg
  Vector3d damping = Vector3d::Constant(1.6);  // diagonal of D_adm, N s/m

  bool valid() const { return (mass.array() > 0.0).all() && (damping.array() > 0.0).all(); }
};

// Text form: one `name = v0 v1 ...` line per vector, full precision.
inline std::string format_vectors(std::initializer_list<std::pair<const char*, const VectorXd*>> items) {
  std::string out;
  for (const auto& [name, vec] : items) {
    out += name;
    out += " =";
    for (Index i = 0; i < vec->size(); ++i) out += " " + format_double((*vec)[i]);
    out += "\n";
  }
  return out;
}

namespace detail {

inline VectorXd read_vector(const KeyValueFile& kv, const std::string& key,
                            std::vector<FieldError>& errors) {
  const auto* e = kv.find(key, errors);
  if (e == nullptr) {
    errors.push_back({0, key, "missing"});
    return {};
  }
  std::vector<double> v;
  if (!parse_numbers(e->value, v)) {
    errors.push_back({e->line, key, "not a number"});
    return {};
  }
  return Eigen::Map<VectorXd>(v.data(), static_cast<Index>(v.size()));
}

}  // namespace detail

inline std::string to_text(const ClosedChainState& s) {
  return format_vectors({{"q", &s.q}, {"qdot", &s.qdot}});
}

inline std::string to_text(const ReducedState& s) {
  return format_vectors({{"gamma", &s.gamma}, {"gamma_dot", &s.gamma_dot}});
}

inline ClosedChainState closed_chain_state_from_text(const std::string& text) {
  const auto kv = KeyValueFile::parse(text);
  std::vector<FieldError> errors;
  ClosedChainState s{detail::read_vector(kv, "q", errors), detail::read_vector(kv, "qdot", errors)};
  if (errors.empty() && s.q.size() != s.qdot.size())
    errors.push_back({0, "qdot", "size differs from q"});
  if (!errors.empty()) throw SchemaError(errors);
  return s;
}

inline ReducedState reduced_state_from_text(const std::string& text) {
  const auto kv = KeyValueFile::parse(text);
  std::vector<FieldError> errors;
  ReducedState s{detail::read_vector(kv, "gamma", errors),
                 detail::read_vector(kv, "gamma_dot", errors)};
  if (errors.empty() && s.gamma.size() != s.gamma_dot.size())
    errors.push_back({0, "gamma_dot", "size differs from gamma"});
  if (!errors.empty()) throw SchemaError(errors);
  return s;
}

}  // namespace sam

#endif  // SAM_CORE_PARAMS_HPP_
