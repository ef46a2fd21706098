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

// Dynamics of the 3D control model
//
//   M_r(gamma) gamma'' + C_r(gamma, gamma') gamma' + g_r(gamma) = tau_gamma
//
// with the platform a translating rigid body and the arm a serial chain on
// it. The pendulum joints are not modelled; the crane carries the total
// weight. The platform rows of g_r hold the linearized pendulum restoring
// force of the whole suspended mass, (m g / l1) [x_com, y_com, 0], so that a
// COM away from below the hook shows up as a load on the platform.

#ifndef SAM_DYNAMICS_REDUCED_HPP_
#define SAM_DYNAMICS_REDUCED_HPP_

#include <functional>
#include <vector>

#include "sam/dynamics/integrator.hpp"
#include "sam/dynamics/terms.hpp"
#include "sam/kinematics/reduced.hpp"

namespace sam {

template <typename T>
MatX<T> reduced_mass_matrix(const VecX<T>& gamma, const SystemParams& p) {
  const auto f = arm_frames<T>(gamma, p);
  const Index m = p.arm_dof();
  const Index n = 3 + m;
  MatX<T> mass = MatX<T>::Zero(n, n);
  mass.template block<3, 3>(0, 0) = Mat3<T>::Identity() * T(p.suspended_mass());
  auto add_point = [&](double mi, const MatX<T>& jv_arm) {
    // Couplings with the platform translation and the arm-only block.
    mass.block(0, 3, 3, m) += jv_arm * mi;
    mass.block(3, 0, m, 3) += jv_arm.transpose() * mi;
    mass.block(3, 3, m, m) += (jv_arm.transpose() * jv_arm) * mi;
  };
  const std::size_t last = p.arm.size() - 1;
  for (std::size_t i = 0; i < p.arm.size(); ++i) {
    add_point(p.arm[i].mass, arm_point_jacobian(f, f.link_com[i], i));
    const MatX<T> jw = arm_angular_jacobian(f, i);
    const Mat3<T> inertia = f.link_rotation[i] * p.arm[i].inertia.cast<T>() *
                            f.link_rotation[i].transpose();
    mass.block(3, 3, m, m) += jw.transpose() * inertia * jw;
  }
  if (p.payload_mass > 0.0) add_point(p.payload_mass, arm_point_jacobian(f, f.ee_position, last));
  return mass;
}

// Gravity load of the arm and payload on the arm joints (fixed-base view).
template <typename T>
VecX<T> arm_gravity(const ArmFrames<T>& f, const SystemParams& p) {
  const Index m = p.arm_dof();
  VecX<T> g = VecX<T>::Zero(m);
  const std::size_t last = p.arm.size() - 1;
  for (std::size_t i = 0; i < p.arm.size(); ++i)
    g += arm_point_jacobian(f, f.link_com[i], i).row(2).transpose() * (p.arm[i].mass * p.gravity);
  if (p.payload_mass > 0.0)
    g += arm_point_jacobian(f, f.ee_position, last).row(2).transpose() *
         (p.payload_mass * p.gravity);
  return g;
}

template <typename T>
VecX<T> reduced_gravity(const VecX<T>& gamma, const SystemParams& p) {
  const auto f = arm_frames<T>(gamma, p);
  const Index m = p.arm_dof();
  VecX<T> g(3 + m);
  const Vec3<T> com = com_from_frames(f, gamma, p);
  const double k = p.suspended_mass() * p.gravity / p.l1;
  g[0] = com.x() * k;
  g[1] = com.y() * k;
  g[2] = T(0.0);
  g.tail(m) = arm_gravity(f, p);
  return g;
}

inline std::vector<MatrixXd> reduced_mass_derivatives(const VectorXd& gamma, const SystemParams& p) {
  std::vector<MatrixXd> dm(static_cast<std::size_t>(gamma.size()));
  // M_r does not depend on the platform position.
  for (Index k = 3; k < gamma.size(); ++k)
    dm[static_cast<std::size_t>(k)] =
        ad::tangents(reduced_mass_matrix<Dual>(ad::seed_unit(gamma, k), p));
  return dm;
}

inline DynamicsTerms reduced_terms_gamma(const VectorXd& gamma, const VectorXd& gamma_dot,
                                         const SystemParams& p) {
  DynamicsTerms out;
  out.space = CoordinateSpace::kReduced;
  out.M = reduced_mass_matrix<double>(gamma, p);
  out.C = christoffel_coriolis(reduced_mass_derivatives(gamma, p), gamma_dot);
  out.g = reduced_gravity<double>(gamma, p);
  return out;
}

inline double reduced_kinetic_energy(const VectorXd& gamma, const VectorXd& gamma_dot,
                                     const SystemParams& p) {
  return 0.5 * gamma_dot.dot(reduced_mass_matrix<double>(gamma, p) * gamma_dot);
}

// Potential of arm and payload in the hook frame.
inline double arm_potential_energy(const VectorXd& gamma, const SystemParams& p) {
  const auto f = arm_frames<double>(gamma, p);
  double v = 0.0;
  for (std::size_t i = 0; i < p.arm.size(); ++i) v += p.arm[i].mass * p.gravity * f.link_com[i].z();
  v += p.payload_mass * p.gravity * f.ee_position.z();
  return v;
}

// Block split of M_r / C_r / g_r into platform (p) and manipulator (m) parts.
struct ReducedBlocks {
  MatrixXd m_pp, m_pm, m_m;  // m_pm: arm rows x platform columns
  MatrixXd c_pm, c_m;
  VectorXd g_p, g_m;
};

inline ReducedBlocks split_blocks(const DynamicsTerms& t) {
  const Index m = t.M.rows() - 3;
  ReducedBlocks b;
  b.m_pp = t.M.topLeftCorner(3, 3);
  b.m_pm = t.M.bottomLeftCorner(m, 3);
  b.m_m = t.M.bottomRightCorner(m, m);
  b.c_pm = t.C.bottomLeftCorner(m, 3);
  b.c_m = t.C.bottomRightCorner(m, m);
  b.g_p = t.g.head(3);
  b.g_m = t.g.tail(m);
  return b;
}

// Accelerations of the admittance-coupled system: the platform obeys
//   M_adm x_p'' + D_adm x_p' = tau_p
// and the arm keeps its couplings to the platform,
//   M_pm x_p'' + M_m q_m'' + C_pm x_p' + C_m q_m' + g_m = tau_m.
struct CoupledAccelerations {
  Vector3d platform;
  VectorXd arm;
};

inline CoupledAccelerations coupled_dynamics(const ReducedState& s, const VectorXd& tau,
                                             const AdmittanceParams& adm, const SystemParams& p) {
  const DynamicsTerms t = reduced_terms_gamma(s.gamma, s.gamma_dot, p);
  const ReducedBlocks b = split_blocks(t);
  const Vector3d xp_dot = s.platform_velocity();
  CoupledAccelerations a;
  a.platform = (tau.head<3>() - adm.damping.cwiseProduct(xp_dot)).cwiseQuotient(adm.mass);
  const VectorXd rhs = tau.tail(p.arm_dof()) - b.g_m - b.c_pm * xp_dot -
                       b.c_m * s.arm_velocity() - b.m_pm * a.platform;
  const Eigen::LLT<MatrixXd> llt(b.m_m);
  if (llt.info() != Eigen::Success) throw SingularityError("coupled_dynamics: arm inertia not SPD");
  a.arm = llt.solve(rhs);
  return a;
}

enum class PlantKind { kRigid, kCoupled, kLocked };

inline const char* plant_name(PlantKind k) {
  switch (k) {
    case PlantKind::kRigid: return "rigid";
    case PlantKind::kCoupled: return "coupled";
    case PlantKind::kLocked: return "locked";
  }
  return "?";
}

// State x = [gamma; gamma']. The input is either a held torque (set between
// steps by a sampled-data controller) or a state-feedback policy.
class ReducedPlant {
 public:
  using Policy = std::function<VectorXd(double, const VectorXd&)>;

  ReducedPlant(const SystemParams& p, PlantKind kind, AdmittanceParams adm = {})
      : params_(p), kind_(kind), adm_(adm), tau_(VectorXd::Zero(p.gamma_dim())) {}

  void set_torque(const VectorXd& tau) { tau_ = tau; }
  void set_policy(Policy policy) { policy_ = std::move(policy); }
  void set_params(const SystemParams& p) { params_ = p; }
  const SystemParams& params() const { return params_; }
  PlantKind kind() const { return kind_; }
  Index dim() const { return params_.gamma_dim(); }

  VectorXd derivative(double t, const VectorXd& x) const {
    const Index n = dim();
    const Index m = n - 3;
    const ReducedState s{x.head(n), x.tail(n)};
    const VectorXd tau = policy_ ? policy_(t, x) : tau_;
    VectorXd dx(2 * n);
    dx.head(n) = s.gamma_dot;
    switch (kind_) {
      case PlantKind::kRigid: {
        const DynamicsTerms d = reduced_terms_gamma(s.gamma, s.gamma_dot, params_);
        dx.tail(n) = d.M.llt().solve(tau - d.C * s.gamma_dot - d.g);
        break;
      }
      case PlantKind::kCoupled: {
        const auto a = coupled_dynamics(s, tau, adm_, params_);
        dx.segment(n, 3) = a.platform;
        dx.tail(m) = a.arm;
        break;
      }
      case PlantKind::kLocked: {
        const DynamicsTerms d = reduced_terms_gamma(s.gamma, s.gamma_dot, params_);
        const ReducedBlocks b = split_blocks(d);
        dx.head(3).setZero();
        dx.segment(n, 3).setZero();
        dx.tail(m) = b.m_m.llt().solve(tau.tail(m) - b.c_m * s.arm_velocity() - b.g_m);
        break;
      }
    }
    return dx;
  }

  Diagnostics diagnostics(double, const VectorXd& x) const {
    const Index n = dim();
    Diagnostics d;
    d.energy = reduced_kinetic_energy(x.head(n), x.tail(n), params_) +
               arm_potential_energy(x.head(n), params_);
    return d;
  }

 private:
  SystemParams params_;
  PlantKind kind_;
  AdmittanceParams adm_;
  VectorXd tau_;
  Policy policy_;
};

}  // namespace sam

#endif  // SAM_DYNAMICS_REDUCED_HPP_
