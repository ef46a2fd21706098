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

// Planar closed-chain dynamics in redundant coordinates q, and the reduction
// q -> delta -> eta to an unconstrained serial-chain model:
//
//   M   = B' S' M^ S B
//   C   = B' (S' M^ S B-dot + S' (M^ S-dot + C^ S) B)
//   g   = B' S' g^
//   tau = B' S' tau^
//
// Two simulators share the same terms: ClosedChainSystem integrates q with
// Lagrange multipliers enforcing A q-dot = 0, SerialSystem integrates eta.

#ifndef SAM_DYNAMICS_PLANAR_HPP_
#define SAM_DYNAMICS_PLANAR_HPP_

#include <cmath>
#include <functional>
#include <vector>

#include "sam/dynamics/integrator.hpp"
#include "sam/dynamics/terms.hpp"
#include "sam/kinematics/planar.hpp"

namespace sam::planar {

template <typename T>
MatX<T> mass_matrix(const Tree& tree, const VecX<T>& q) {
  const Index n = q.size();
  MatX<T> m = MatX<T>::Zero(n, n);
  for (const auto& body : tree.bodies) {
    const MatX<T> jv = position_jacobian(body.terms, q);
    m += (jv.transpose() * jv) * body.mass;
    if (body.inertia > 0.0) {
      for (Index i : body.angle_coords)
        for (Index j : body.angle_coords) m(i, j) += T(body.inertia);
    }
  }
  return m;
}

inline double potential_energy(const Tree& tree, const VectorXd& q, const SystemParams& p) {
  double v = 0.0;
  for (const auto& body : tree.bodies) v += body.mass * p.gravity * position(body.terms, q).y();
  return v;
}

inline double kinetic_energy(const Tree& tree, const VectorXd& q, const VectorXd& qdot) {
  return 0.5 * qdot.dot(mass_matrix<double>(tree, q) * qdot);
}

inline VectorXd gravity_vector(const Tree& tree, const VectorXd& q, const SystemParams& p) {
  VectorXd g = VectorXd::Zero(q.size());
  for (const auto& body : tree.bodies)
    g += position_jacobian<double>(body.terms, q).row(1).transpose() * (body.mass * p.gravity);
  return g;
}

// M^, C^, g^ of the tree cut at the tip of cable 2.
inline DynamicsTerms closed_chain_terms(const Tree& tree, const VectorXd& q, const VectorXd& qdot,
                                        const SystemParams& p) {
  DynamicsTerms out;
  out.space = CoordinateSpace::kClosedChain;
  out.M = mass_matrix<double>(tree, q);
  std::vector<MatrixXd> dm(static_cast<std::size_t>(q.size()));
  for (Index k = 0; k < q.size(); ++k)
    dm[static_cast<std::size_t>(k)] = ad::tangents(mass_matrix<Dual>(tree, ad::seed_unit(q, k)));
  out.C = christoffel_coriolis(dm, qdot);
  out.g = gravity_vector(tree, q, p);
  return out;
}

inline DynamicsTerms closed_chain_terms(const VectorXd& q, const VectorXd& qdot,
                                        const SystemParams& p) {
  return closed_chain_terms(build_tree(p), q, qdot, p);
}

// S, B and their time derivatives along a consistent (q, q-dot).
struct ReductionMaps {
  MatrixXd s, s_dot;
  MatrixXd b, b_dot;
  VectorXd eta, eta_dot;
};

inline ReductionMaps reduction_maps(const VectorXd& q, const VectorXd& qdot, const SystemParams& p) {
  ReductionMaps r;
  const MatX<Dual> s = selection_matrix<Dual>(ad::seed(q, qdot), p);
  r.s = ad::values(s);
  r.s_dot = ad::tangents(s);
  const VecX<Dual> eta = eta_from_q<Dual>(ad::seed(q, qdot), p);
  r.eta = ad::values(eta);
  r.eta_dot = ad::tangents(eta);
  const MatX<Dual> b = serial_map_eta<Dual>(ad::seed(r.eta, r.eta_dot), p);
  r.b = ad::values(b);
  r.b_dot = ad::tangents(b);
  return r;
}

inline DynamicsTerms reduce_to_serial(const DynamicsTerms& tq, const MatrixXd& s, const MatrixXd& b,
                                      const MatrixXd& s_dot, const MatrixXd& b_dot) {
  DynamicsTerms out;
  out.space = CoordinateSpace::kSerial;
  const MatrixXd sb = s * b;
  out.M = sb.transpose() * tq.M * sb;
  out.M = 0.5 * (out.M + out.M.transpose());
  out.C = b.transpose() *
          (s.transpose() * tq.M * s * b_dot + s.transpose() * (tq.M * s_dot + tq.C * s) * b);
  out.g = sb.transpose() * tq.g;
  return out;
}

inline DynamicsTerms reduce_to_serial(const DynamicsTerms& tq, const ReductionMaps& r) {
  return reduce_to_serial(tq, r.s, r.b, r.s_dot, r.b_dot);
}

inline VectorXd serial_torque(const VectorXd& tau_q, const ReductionMaps& r) {
  return (r.s * r.b).transpose() * tau_q;
}

// Generalized forces in q-space, plus the potential of any conservative part so
// that energy diagnostics stay meaningful.
struct Inputs {
  std::function<VectorXd(double, const VectorXd&, const VectorXd&)> torque;
  std::function<double(const VectorXd&)> potential;  // may be empty
};

// Winches as stiff springs about rest lengths on q3/q6 (optionally damped) and
// sinusoidal joint torques on the arm.
struct WinchSpringExcitation {
  double stiffness = 5000.0;
  double damping = 0.0;
  Vector2d rest_length{0.9, 0.9};
  VectorXd arm_amplitude;  // N m per arm joint; empty = unforced
  double frequency = 0.5;  // Hz
  Vector2d winch_amplitude = Vector2d::Zero();  // N on q3, q6
};

inline Inputs make_inputs(const WinchSpringExcitation& w, Index n) {
  Inputs in;
  in.torque = [w, n](double t, const VectorXd& q, const VectorXd& qdot) {
    VectorXd tau = VectorXd::Zero(n);
    constexpr double kTwoPi = 6.28318530717958647692;
    const double s = std::sin(kTwoPi * w.frequency * t);
    tau[kQ3] = -w.stiffness * (q[kQ3] - w.rest_length[0]) - w.damping * qdot[kQ3] +
               w.winch_amplitude[0] * s;
    tau[kQ6] = -w.stiffness * (q[kQ6] - w.rest_length[1]) - w.damping * qdot[kQ6] +
               w.winch_amplitude[1] * std::cos(kTwoPi * w.frequency * t);
    if (w.arm_amplitude.size() > 0) {
      for (Index i = 0; i < w.arm_amplitude.size(); ++i)
        tau[kQArm + i] = w.arm_amplitude[i] * std::sin(kTwoPi * w.frequency * (t + 0.3 * i));
    }
    return tau;
  };
  in.potential = [w](const VectorXd& q) {
    const double d3 = q[kQ3] - w.rest_length[0];
    const double d6 = q[kQ6] - w.rest_length[1];
    return 0.5 * w.stiffness * (d3 * d3 + d6 * d6);
  };
  return in;
}

// Index-1 constrained dynamics on x = [q; q-dot]:
//   [M^  -A'] [q''   ]   [tau^ - C^ q' - g^]
//   [A    0 ] [lambda] = [-A-dot q'        ]
class ClosedChainSystem {
 public:
  ClosedChainSystem(const SystemParams& p, Inputs inputs)
      : params_(p), tree_(build_tree(p)), inputs_(std::move(inputs)) {}

  Index dof() const { return tree_.dof; }
  const Tree& tree() const { return tree_; }

  struct Solution {
    VectorXd qddot;
    Eigen::Vector2d lambda;
  };

  Solution solve(double t, const VectorXd& q, const VectorXd& qdot) const {
    const DynamicsTerms terms = closed_chain_terms(tree_, q, qdot, params_);
    const MatX<Dual> a_dual = constraint_matrix<Dual>(ad::seed(q, qdot), params_);
    const MatrixXd a = ad::values(a_dual);
    const VectorXd adot_qdot = ad::tangents(a_dual) * qdot;
    VectorXd rhs = -terms.C * qdot - terms.g;
    if (inputs_.torque) rhs += inputs_.torque(t, q, qdot);
    const Eigen::LLT<MatrixXd> llt(terms.M);
    const VectorXd free = llt.solve(rhs);
    const MatrixXd minv_at = llt.solve(a.transpose());
    const Eigen::Matrix2d schur = a * minv_at;
    Solution s;
    s.lambda = schur.ldlt().solve(-adot_qdot - a * free);
    s.qddot = free + minv_at * s.lambda;
    return s;
  }

  VectorXd derivative(double t, const VectorXd& x) const {
    const Index n = dof();
    VectorXd dx(2 * n);
    dx.head(n) = x.tail(n);
    dx.tail(n) = solve(t, x.head(n), x.tail(n)).qddot;
    return dx;
  }

  Diagnostics diagnostics(double, const VectorXd& x) const {
    const Index n = dof();
    const VectorXd q = x.head(n), qdot = x.tail(n);
    Diagnostics d;
    d.energy = kinetic_energy(tree_, q, qdot) + potential_energy(tree_, q, params_);
    if (inputs_.potential) d.energy += inputs_.potential(q);
    d.residual = loop_closure_position(q, params_).residual().norm();
    d.constraint_velocity = (constraint_matrix<double>(q, params_) * qdot).norm();
    return d;
  }

  // Pulls a drifted state back onto the closure manifold: Newton on (q2, q5)
  // for positions, then the velocity is re-expressed through S.
  VectorXd project(const VectorXd& x) const {
    const Index n = dof();
    VectorXd q = x.head(n);
    for (int it = 0; it < 20; ++it) {
      const Vector2d r = loop_closure_position(q, params_).residual();
      if (r.norm() < 1e-14) break;
      const MatrixXd a = constraint_matrix<double>(q, params_);
      Eigen::Matrix2d ad;
      ad << a(0, kQ2), a(0, kQ5), a(1, kQ2), a(1, kQ5);
      const Vector2d step = ad.partialPivLu().solve(r);
      q[kQ2] -= step[0];
      q[kQ5] -= step[1];
    }
    const MatrixXd s = selection_matrix<double>(q, params_);
    const VectorXd delta_dot = delta_from_q<double>(x.tail(n), params_);
    VectorXd out(2 * n);
    out << q, s * delta_dot;
    return out;
  }

 private:
  SystemParams params_;
  Tree tree_;
  Inputs inputs_;
};

// Unconstrained serial-chain dynamics on x = [eta; eta-dot], with q-space
// inputs mapped through B' S'.
class SerialSystem {
 public:
  SerialSystem(const SystemParams& p, Inputs inputs)
      : params_(p), tree_(build_tree(p)), inputs_(std::move(inputs)) {}

  Index dof() const { return tree_.dof - 2; }

  DynamicsTerms terms(const VectorXd& eta, const VectorXd& eta_dot, ReductionMaps* maps_out,
                      ClosedChainState* q_out) const {
    const ClosedChainState cs = closed_chain_from_eta(eta, eta_dot, params_);
    ReductionMaps maps = reduction_maps(cs.q, cs.qdot, params_);
    const DynamicsTerms tq = closed_chain_terms(tree_, cs.q, cs.qdot, params_);
    DynamicsTerms out = reduce_to_serial(tq, maps);
    if (maps_out) *maps_out = std::move(maps);
    if (q_out) *q_out = cs;
    return out;
  }

  VectorXd derivative(double t, const VectorXd& x) const {
    const Index k = dof();
    const VectorXd eta = x.head(k), eta_dot = x.tail(k);
    ReductionMaps maps;
    ClosedChainState cs;
    const DynamicsTerms te = terms(eta, eta_dot, &maps, &cs);
    VectorXd rhs = -te.C * eta_dot - te.g;
    if (inputs_.torque) rhs += serial_torque(inputs_.torque(t, cs.q, cs.qdot), maps);
    VectorXd dx(2 * k);
    dx.head(k) = eta_dot;
    dx.tail(k) = te.M.llt().solve(rhs);
    return dx;
  }

  Diagnostics diagnostics(double, const VectorXd& x) const {
    const Index k = dof();
    const ClosedChainState cs = closed_chain_from_eta(x.head(k), x.tail(k), params_);
    Diagnostics d;
    d.energy = kinetic_energy(tree_, cs.q, cs.qdot) + potential_energy(tree_, cs.q, params_);
    if (inputs_.potential) d.energy += inputs_.potential(cs.q);
    d.residual = loop_closure_position(cs.q, params_).residual().norm();
    d.constraint_velocity = (constraint_matrix<double>(cs.q, params_) * cs.qdot).norm();
    return d;
  }

  VectorXd project(const VectorXd& x) const { return x; }

 private:
  SystemParams params_;
  Tree tree_;
  Inputs inputs_;
};

// Platform hanging level below the hook with both cables at `cable_length`,
// arm joints at `arm`, pendulum at q1.
inline VectorXd symmetric_eta(const SystemParams& p, double cable_length, const VectorXd& arm,
                              double q1 = 0.0) {
  const Vector2d b = p.planar.attach_b;
  const double h = std::sqrt(cable_length * cable_length - b.x() * b.x());
  VectorXd eta(4 + arm.size());
  const Vector2d a = down(q1) * p.l1;
  eta << q1, a.x(), 0.0, a.y() - h - b.y(), arm;
  return eta;
}

}  // namespace sam::planar

#endif  // SAM_DYNAMICS_PLANAR_HPP_
