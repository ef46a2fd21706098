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

// Planar closed-chain kinematics: the crane chain O-A, two rigging cables A-B
// and A-E whose tips hold the platform, and a planar arm mounted at D.
//
// The loop A-B-C-E-A is cut at the tip of cable 2. Closing it requires the
// platform centre C reached through cable 1 to coincide with C reached
// through cable 2:
//
//   C = A + q3 u(q1 + q2) - R(q4) b = A + q6 u(q1 + q5) - R(q4) e,
//
// with u(t) = [sin t, -cos t] and b, e the cable tips in the platform frame.
// The two scalar equations make q2 and q5 dependent; [q1, q3, q4, q6, q_m]
// stays independent.
//
// All geometry is templated on the scalar so that evaluating at `Dual`
// arguments returns exact time derivatives (S-dot, B-dot, A-dot q-dot).

#ifndef SAM_KINEMATICS_PLANAR_HPP_
#define SAM_KINEMATICS_PLANAR_HPP_

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "sam/core/common.hpp"
#include "sam/core/params.hpp"

namespace sam::planar {

using std::cos;
using std::sin;
using std::sqrt;

inline Index dof(const SystemParams& p) { return 6 + p.planar_arm_dof(); }
inline Index independent_dof(const SystemParams& p) { return 4 + p.planar_arm_dof(); }

// Position of each delta entry inside q.
inline std::vector<Index> independent_indices(const SystemParams& p) {
  std::vector<Index> idx = {kQ1, kQ3, kQ4, kQ6};
  for (int i = 0; i < p.planar_arm_dof(); ++i) idx.push_back(kQArm + i);
  return idx;
}
inline constexpr std::array<Index, 2> kDependent = {kQ2, kQ5};

template <typename T>
Vec2<T> rotate(const T& angle, const Vector2d& v) {
  const T c = cos(angle), s = sin(angle);
  return Vec2<T>(c * v.x() - s * v.y(), s * v.x() + c * v.y());
}

// d/d(angle) of rotate(angle, v).
template <typename T>
Vec2<T> rotate_prime(const T& angle, const Vector2d& v) {
  return rotate(angle, Vector2d(-v.y(), v.x()));
}

template <typename T>
Vec2<T> down(const T& angle) {
  return Vec2<T>(sin(angle), -cos(angle));
}

template <typename T>
Vec2<T> down_prime(const T& angle) {
  return Vec2<T>(cos(angle), sin(angle));
}

// Angle of v measured from the downward vertical, counter-clockwise.
template <typename T>
T angle_from_down(const Vec2<T>& v) {
  using std::atan2;
  return atan2(v.x(), -v.y());
}

template <typename T>
struct LoopPoints {
  Vec2<T> a, b, e;
  Vec2<T> c_via_b, c_via_e;
};

template <typename T>
LoopPoints<T> loop_points(const VecX<T>& q, const SystemParams& p) {
  LoopPoints<T> out;
  out.a = down(q[kQ1]) * p.l1;
  out.b = out.a + down(T(q[kQ1] + q[kQ2])) * q[kQ3];
  out.e = out.a + down(T(q[kQ1] + q[kQ5])) * q[kQ6];
  out.c_via_b = out.b - rotate(q[kQ4], p.planar.attach_b);
  out.c_via_e = out.e - rotate(q[kQ4], p.planar.attach_e);
  return out;
}

struct LoopClosure {
  Vector2d branch_ab;  // C along O -> A -> B -> C
  Vector2d branch_ae;  // C along O -> A -> E -> C
  Vector2d residual() const { return branch_ab - branch_ae; }
};

inline LoopClosure loop_closure_position(const VectorXd& q, const SystemParams& p) {
  const auto pts = loop_points<double>(q, p);
  return {pts.c_via_b, pts.c_via_e};
}

// Pfaffian matrix: Jacobian of the branch difference c_via_b - c_via_e.
template <typename T>
MatX<T> constraint_matrix(const VecX<T>& q, const SystemParams& p) {
  const Index n = q.size();
  MatX<T> a = MatX<T>::Zero(2, n);
  const T t1 = q[kQ1] + q[kQ2];
  const T t2 = q[kQ1] + q[kQ5];
  const Vec2<T> d1 = down_prime(t1) * q[kQ3];
  const Vec2<T> d2 = down_prime(t2) * q[kQ6];
  a.col(kQ1) = d1 - d2;
  a.col(kQ2) = d1;
  a.col(kQ3) = down(t1);
  a.col(kQ4) = rotate_prime(q[kQ4], Vector2d(p.planar.attach_e - p.planar.attach_b));
  a.col(kQ5) = -d2;
  a.col(kQ6) = -down(t2);
  return a;
}

inline bool constraint_singular(const MatrixXd& a) {
  return inverse_condition(a) < kSingularRatio;
}

// q-dot = S delta-dot. Rows of S at delta positions form the identity; the
// dependent rows solve A S = 0.
template <typename T>
MatX<T> selection_matrix(const VecX<T>& q, const SystemParams& p) {
  const MatX<T> a = constraint_matrix(q, p);
  const auto ind = independent_indices(p);
  const Index n = q.size();
  const Index k = static_cast<Index>(ind.size());
  Mat2<T> ad;
  ad.col(0) = a.col(kQ2);
  ad.col(1) = a.col(kQ5);
  if (inverse_condition(ad::values(ad)) < kSingularRatio)
    throw SingularityError("selection_matrix: cable directions are parallel");
  const T det = ad(0, 0) * ad(1, 1) - ad(0, 1) * ad(1, 0);
  Mat2<T> inv;
  inv << ad(1, 1) / det, -ad(0, 1) / det, -ad(1, 0) / det, ad(0, 0) / det;
  MatX<T> ai(2, k);
  for (Index j = 0; j < k; ++j) ai.col(j) = a.col(ind[j]);
  const MatX<T> dep = -(inv * ai);
  MatX<T> s = MatX<T>::Zero(n, k);
  for (Index j = 0; j < k; ++j) s(ind[j], j) = T(1.0);
  s.row(kQ2) = dep.row(0);
  s.row(kQ5) = dep.row(1);
  return s;
}

// eta = [q1, x_c, q4, y_c, q_m] -> consistent q. Closed form: both cable tips
// follow from the platform pose; lengths and angles from A follow.
template <typename T>
VecX<T> q_from_eta(const VecX<T>& eta, const SystemParams& p) {
  const Index m = eta.size() - 4;
  VecX<T> q(6 + m);
  const T q1 = eta[0];
  const T q4 = eta[2];
  const Vec2<T> c(eta[1], eta[3]);
  const Vec2<T> a = down(q1) * p.l1;
  const Vec2<T> ab = c + rotate(q4, p.planar.attach_b) - a;
  const Vec2<T> ae = c + rotate(q4, p.planar.attach_e) - a;
  q[kQ1] = q1;
  q[kQ2] = angle_from_down(ab) - q1;
  q[kQ3] = ab.norm();
  q[kQ4] = q4;
  q[kQ5] = angle_from_down(ae) - q1;
  q[kQ6] = ae.norm();
  q.tail(m) = eta.tail(m);
  return q;
}

template <typename T>
VecX<T> eta_from_q(const VecX<T>& q, const SystemParams& p) {
  const Index m = q.size() - 6;
  const auto pts = loop_points(q, p);
  VecX<T> eta(4 + m);
  eta << q[kQ1], pts.c_via_b.x(), q[kQ4], pts.c_via_b.y(), q.tail(m);
  return eta;
}

template <typename T>
VecX<T> delta_from_q(const VecX<T>& q, const SystemParams& p) {
  const auto ind = independent_indices(p);
  VecX<T> d(static_cast<Index>(ind.size()));
  for (std::size_t i = 0; i < ind.size(); ++i) d[static_cast<Index>(i)] = q[ind[i]];
  return d;
}

// delta-dot = B eta-dot, from differentiating the closed-form cable lengths.
template <typename T>
MatX<T> serial_map_eta(const VecX<T>& eta, const SystemParams& p) {
  const Index k = eta.size();
  const T q1 = eta[0];
  const T q4 = eta[2];
  const Vec2<T> c(eta[1], eta[3]);
  const Vec2<T> a = down(q1) * p.l1;
  MatX<T> b = MatX<T>::Identity(k, k);
  auto length_row = [&](const Vector2d& tip, Index row) {
    const Vec2<T> v = c + rotate(q4, tip) - a;
    const Vec2<T> n = v / v.norm();
    b.row(row).setZero();
    b(row, 0) = -n.dot(down_prime(q1)) * p.l1;  // d/dq1
    b(row, 1) = n.x();                             // d/dx_c
    b(row, 2) = n.dot(rotate_prime(q4, tip));      // d/dq4
    b(row, 3) = n.y();                             // d/dy_c
    return n;
  };
  // delta order: q1, q3, q4, q6.
  const Vec2<T> nb = length_row(p.planar.attach_b, 1);
  const Vec2<T> ne = length_row(p.planar.attach_e, 3);
  Mat2<double> lat;
  lat << ad::value(nb.x()), ad::value(nb.y()), ad::value(ne.x()), ad::value(ne.y());
  if (inverse_condition(lat) < kSingularRatio)
    throw SingularityError("serial_map: cables are parallel");
  return b;
}

template <typename T>
MatX<T> serial_map(const VecX<T>& q, const SystemParams& p) {
  return serial_map_eta(eta_from_q(q, p), p);
}

struct ConstraintMatrices {
  MatrixXd a;  // 2 x (6+m)
  MatrixXd s;  // (6+m) x (4+m)
  MatrixXd b;  // (4+m) x (4+m)
};

inline ConstraintMatrices constraint_matrices(const VectorXd& q, const SystemParams& p) {
  return {constraint_matrix(q, p), selection_matrix(q, p), serial_map(q, p)};
}

// Consistent (q, q-dot) from (eta, eta-dot).
inline ClosedChainState closed_chain_from_eta(const VectorXd& eta, const VectorXd& eta_dot,
                                              const SystemParams& p) {
  ClosedChainState s;
  const VecX<Dual> q = q_from_eta<Dual>(ad::seed(eta, eta_dot), p);
  s.q = ad::values(q);
  s.qdot = ad::tangents(q);
  return s;
}

inline IndependentState independent_state(const ClosedChainState& s, const SystemParams& p) {
  IndependentState out;
  out.delta = delta_from_q<double>(s.q, p);
  out.delta_dot = delta_from_q<double>(s.qdot, p);
  const VecX<Dual> eta = eta_from_q<Dual>(ad::seed(s.q, s.qdot), p);
  out.eta = ad::values(eta);
  out.eta_dot = ad::tangents(eta);
  return out;
}

// ---------------------------------------------------------------------------
// Mass distribution of the cut-open tree.
//
// Every point of interest is a sum of terms  len * R(sum of angle coords) v,
// where len is a constant or a prismatic coordinate. Jacobians follow term by
// term without numerical differentiation.

struct Term {
  Index length_coord = -1;  // -1: constant length
  double length = 1.0;
  std::vector<Index> angle_coords;
  Vector2d v;
};

struct Body {
  std::string name;
  double mass = 0.0;
  double inertia = 0.0;  // about the body COM; zero for point masses
  std::vector<Term> terms;
  std::vector<Index> angle_coords;  // body orientation = sum of these
};

struct Tree {
  std::vector<Body> bodies;
  std::vector<Term> end_effector;
  std::vector<std::size_t> com_bodies;  // platform and arm links
  Index dof = 0;
};

inline Tree build_tree(const SystemParams& p) {
  const auto& g = p.planar;
  const Vector2d kDown(0.0, -1.0);
  Tree t;
  t.dof = dof(p);
  const std::vector<Term> a = {{-1, p.l1, {kQ1}, kDown}};
  auto with = [](std::vector<Term> base, const Term& extra) {
    base.push_back(extra);
    return base;
  };
  const auto b = with(a, {kQ3, 1.0, {kQ1, kQ2}, kDown});
  const auto e = with(a, {kQ6, 1.0, {kQ1, kQ5}, kDown});
  const auto c = with(b, {-1, 1.0, {kQ4}, Vector2d(-g.attach_b)});
  t.bodies.push_back({"hook", p.m1, 0.0, a, {}});
  t.bodies.push_back({"cable1_tip", g.cable_tip_mass, 0.0, b, {}});
  t.bodies.push_back({"cable2_tip", g.cable_tip_mass, 0.0, e, {}});
  t.bodies.push_back({"platform", p.platform_mass, g.platform_inertia, c, {kQ4}});
  t.com_bodies.push_back(3);
  auto joint = with(c, {-1, 1.0, {kQ4}, g.arm_mount});
  std::vector<Index> angles = {kQ4};
  for (int i = 0; i < p.planar_arm_dof(); ++i) {
    const auto& link = g.arm[static_cast<std::size_t>(i)];
    angles.push_back(kQArm + i);
    t.bodies.push_back({"arm" + std::to_string(i + 1), link.mass, link.inertia,
                        with(joint, {-1, link.com, angles, kDown}), angles});
    t.com_bodies.push_back(t.bodies.size() - 1);
    joint = with(joint, {-1, link.length, angles, kDown});
  }
  t.end_effector = joint;
  return t;
}

template <typename T>
T term_angle(const Term& term, const VecX<T>& q) {
  T a(0.0);
  for (Index i : term.angle_coords) a += q[i];
  return a;
}

template <typename T>
Vec2<T> position(const std::vector<Term>& terms, const VecX<T>& q) {
  Vec2<T> out = Vec2<T>::Zero();
  for (const auto& term : terms) {
    const Vec2<T> r = rotate(term_angle(term, q), term.v);
    if (term.length_coord >= 0) {
      out += r * q[term.length_coord];
    } else {
      out += r * term.length;
    }
  }
  return out;
}

template <typename T>
MatX<T> position_jacobian(const std::vector<Term>& terms, const VecX<T>& q) {
  MatX<T> j = MatX<T>::Zero(2, q.size());
  for (const auto& term : terms) {
    const T angle = term_angle(term, q);
    const Vec2<T> r = rotate(angle, term.v);
    const Vec2<T> dr = rotate_prime(angle, term.v);
    const T len = term.length_coord >= 0 ? q[term.length_coord] : T(term.length);
    for (Index i : term.angle_coords) j.col(i) += dr * len;
    if (term.length_coord >= 0) j.col(term.length_coord) += r;
  }
  return j;
}

template <typename T>
Vec2<T> end_effector(const Tree& tree, const VecX<T>& q) {
  return position(tree.end_effector, q);
}

// Platform-plus-arm centre of mass.
template <typename T>
Vec2<T> center_of_mass(const Tree& tree, const VecX<T>& q) {
  Vec2<T> acc = Vec2<T>::Zero();
  double m = 0.0;
  for (std::size_t i : tree.com_bodies) {
    acc += position(tree.bodies[i].terms, q) * tree.bodies[i].mass;
    m += tree.bodies[i].mass;
  }
  return acc / m;
}

}  // namespace sam::planar

#endif  // SAM_KINEMATICS_PLANAR_HPP_
