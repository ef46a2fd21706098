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

// Hierarchical whole-body impedance control on gamma = [x_p, q_m].
//
// Tasks, highest priority first: end-effector pose (6), centre of mass (3),
// elbow damping (1). Each task acts through the dynamically consistent
// null space of all tasks above it:
//
//   N_1 = I,  N_i = I - Ja_i' (Ja_i M^-1 Ja_i')^-1 Ja_i M^-1,  Jbar_i = J_i N_i'
//
// where Ja_i stacks J_1 ... J_{i-1}. With nu = Jbar gamma' the closed loop
// reads Lambda nu' + mu nu = F, Lambda block diagonal; the off-diagonal
// blocks of mu are cancelled by tau_mu.
//
//   tau = g_r + tau_mu + sum_i Jbar_i' F_i,   F_i = -K_P,i p_i - K_D,i x_i'

#ifndef SAM_CONTROL_CONTROLLER_HPP_
#define SAM_CONTROL_CONTROLLER_HPP_

#include <cmath>
#include <vector>

#include "sam/core/common.hpp"
#include "sam/core/params.hpp"
#include "sam/core/targets.hpp"
#include "sam/dynamics/reduced.hpp"
#include "sam/kinematics/reduced.hpp"

namespace sam::control {

inline constexpr double kDampingOnset = 1e-4;  // smallest undamped eigenvalue of J M^-1 J^T

// Inverse of a symmetric positive semi-definite matrix. Eigenvalues below
// kDampingOnset are regularized, smoothly from zero at the onset to full
// damping at zero. The onset is absolute: the task inertias mix units, so a
// ratio to the largest eigenvalue would damp regular poses.
inline MatrixXd damped_inverse(const MatrixXd& a, bool* damped = nullptr) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  const VectorXd& ev = es.eigenvalues();
  const double onset = kDampingOnset;
  VectorXd inv(ev.size());
  bool any = false;
  for (Index i = 0; i < ev.size(); ++i) {
    const double l = std::max(ev[i], 0.0);
    if (l >= onset) {
      inv[i] = 1.0 / l;
    } else {
      const double r = l / onset;
      const double rho2 = onset * onset * (1.0 - r * r);
      inv[i] = l / (l * l + rho2);
      any = true;
    }
  }
  if (damped) *damped = any;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

template <typename T>
struct Hierarchy {
  std::vector<MatX<T>> projector;  // N_i, torque side
  std::vector<MatX<T>> jbar;       // Jbar_i
  std::vector<MatX<T>> lambda;     // Lambda_i
  std::vector<Index> offset;       // first row of task i in the stacked Jbar
  MatX<T> jbar_ext;                // stacked Jbar_i
  bool damped = false;

  std::size_t tasks() const { return jbar.size(); }
  Index dim(std::size_t i) const { return jbar[i].rows(); }
};

template <typename T>
MatX<T> spd_inverse(const MatX<T>& a) {
  return a.llt().solve(MatX<T>::Identity(a.rows(), a.cols()));
}

// Throws SingularityError when a stacked Jacobian of higher-priority tasks
// loses rank.
template <typename T>
Hierarchy<T> build_hierarchy(const MatX<T>& mass, const std::vector<MatX<T>>& jacobians) {
  const Index n = mass.rows();
  const MatX<T> minv = spd_inverse(mass);
  Hierarchy<T> h;
  MatX<T> aug(0, n);
  Index rows = 0;
  for (const auto& j : jacobians) {
    MatX<T> proj = MatX<T>::Identity(n, n);
    if (aug.rows() > 0) {
      const MatX<T> inner = aug * minv * aug.transpose();
      if (inverse_condition(ad::values(inner)) < kSingularRatio)
        throw SingularityError("build_hierarchy: augmented Jacobian of " +
                               std::to_string(h.jbar.size()) + " tasks lost rank");
      proj -= aug.transpose() * spd_inverse(inner) * aug * minv;
    }
    const MatX<T> jb = j * proj.transpose();
    const MatX<T> lambda_inv = jb * minv * jb.transpose();
    // A task losing rank inside the remaining null space is handled by the
    // damped inverse below; only the augmented Jacobian raises.
    MatX<T> lambda;
    if constexpr (std::is_same_v<T, double>) {
      bool damped = false;
      lambda = damped_inverse(lambda_inv, &damped);
      h.damped = h.damped || damped;
    } else {
      lambda = spd_inverse(lambda_inv);
    }
    h.projector.push_back(proj);
    h.jbar.push_back(jb);
    h.lambda.push_back(lambda);
    h.offset.push_back(rows);
    rows += j.rows();
    MatX<T> next(aug.rows() + j.rows(), n);
    next << aug, j;
    aug = next;
  }
  h.jbar_ext = MatX<T>(rows, n);
  for (std::size_t i = 0; i < h.jbar.size(); ++i) h.jbar_ext.middleRows(h.offset[i], h.dim(i)) = h.jbar[i];
  return h;
}

template <typename T>
std::vector<MatX<T>> task_list(const TaskJacobians<T>& j) {
  return {j.j1, j.j2, j.j3};
}

// mu = Jbar^-T (C - M Jbar^-1 Jbar') Jbar^-1 for a square extended Jacobian.
inline MatrixXd transformed_coriolis(const MatrixXd& jbar, const MatrixXd& jbar_dot,
                                     const MatrixXd& mass, const MatrixXd& coriolis) {
  const Eigen::PartialPivLU<MatrixXd> lu(jbar);
  const MatrixXd jinv = lu.inverse();
  return jinv.transpose() * (coriolis - mass * jinv * jbar_dot) * jinv;
}

// tau_mu = sum_i Jbar_i' sum_{j != i} mu_ij nu_j.
inline VectorXd coriolis_decoupling(const Hierarchy<double>& h, const MatrixXd& mu,
                                    const VectorXd& nu) {
  VectorXd tau = VectorXd::Zero(h.jbar_ext.cols());
  for (std::size_t i = 0; i < h.tasks(); ++i) {
    VectorXd f = VectorXd::Zero(h.dim(i));
    for (std::size_t j = 0; j < h.tasks(); ++j) {
      if (i == j) continue;
      f += mu.block(h.offset[i], h.offset[j], h.dim(i), h.dim(j)) * nu.segment(h.offset[j], h.dim(j));
    }
    tau += h.jbar[i].transpose() * f;
  }
  return tau;
}

// Damping that makes (Lambda, K, D) critically damped per mode for
// damping_ratio = 1: with K v = w^2 Lambda v and V' Lambda V = I,
// D = 2 zeta Lambda V diag(w) V' Lambda.
inline MatrixXd double_diagonalization_damping(const MatrixXd& stiffness, const MatrixXd& lambda,
                                               double damping_ratio) {
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(stiffness, lambda);
  const MatrixXd& v = es.eigenvectors();
  const VectorXd w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  MatrixXd d = 2.0 * damping_ratio * lambda * v * w.asDiagonal() * v.transpose() * lambda;
  return 0.5 * (d + d.transpose());
}

inline VectorXd impedance_force(const VectorXd& error, const VectorXd& velocity,
                                const MatrixXd& stiffness, const MatrixXd& damping) {
  return -stiffness * error - damping * velocity;
}

struct ControlOptions {
  bool com_task = true;  // task-2 force; the task stays in the hierarchy either way
  bool coriolis_decoupling = true;  // tau_mu
  // Admittance-driven platform: remove the manipulator/platform coupling
  // from the arm rows and drop g_r from the platform rows.
  bool admittance = false;
  // With the admittance active, decouple the tasks with the inertia the
  // compensated plant actually has, blockdiag(M_adm, M_m), instead of M_r.
  bool effective_inertia = true;
  AdmittanceParams adm;
};

struct ControlOutput {
  VectorXd tau;  // [tau_p; tau_m]
  VectorXd tau_mu;
  VectorXd nu;
  Vector6d force_ee = Vector6d::Zero();
  Vector3d force_com = Vector3d::Zero();
  double force_elbow = 0.0;
  Vector6d error_ee = Vector6d::Zero();
  Vector3d error_com = Vector3d::Zero();
  Vector3d platform_accel = Vector3d::Zero();  // admittance x_p'' implied by tau_p
  bool damped = false;

  Vector3d tau_p() const { return tau.head<3>(); }
  VectorXd tau_m() const { return tau.tail(tau.size() - 3); }
};

inline ControlOutput control_law(const ReducedState& s, const TaskTargets& targets,
                                 const SystemParams& p, const ControlOptions& opt = {}) {
  const Index n = p.gamma_dim();
  const DynamicsTerms d = reduced_terms_gamma(s.gamma, s.gamma_dot, p);
  const TaskJacobians<double> jac = task_jacobians<double>(s.gamma, p);
  // Inertia the tasks are decoupled with.
  MatrixXd mh = d.M, ch = d.C;
  if (opt.admittance && opt.effective_inertia) {
    mh.topRows(3).setZero();
    mh.leftCols(3).setZero();
    mh.topLeftCorner(3, 3) = opt.adm.mass.asDiagonal();
    ch.topRows(3).setZero();
    ch.leftCols(3).setZero();
    // The admittance damping is velocity-proportional like C; keeping it in
    // the model lets tau_mu cancel its task cross-coupling.
    ch.topLeftCorner(3, 3) = opt.adm.damping.asDiagonal();
  }
  const Hierarchy<double> h = build_hierarchy<double>(mh, task_list(jac));

  ControlOutput out;
  out.damped = h.damped;
  out.nu = h.jbar_ext * s.gamma_dot;

  // Task forces.
  const Pose ee = fk_end_effector(s.gamma, p);
  out.error_ee = pose_error(ee, targets.ee);
  const MatrixXd k1 = targets.gains.stiffness_ee.asDiagonal();
  const MatrixXd d1 = double_diagonalization_damping(k1, h.lambda[0], targets.gains.damping_ratio_ee);
  out.force_ee = impedance_force(out.error_ee, jac.j1 * s.gamma_dot, k1, d1);
  VectorXd tau = d.g + h.jbar[0].transpose() * out.force_ee;
  out.error_com = fk_com<double>(s.gamma, p) - targets.com;
  if (opt.com_task) {
    const MatrixXd k2 = targets.gains.stiffness_com.asDiagonal();
    const MatrixXd d2 =
        targets.gains.damping_ratio_com > 0.0
            ? double_diagonalization_damping(k2, h.lambda[1], targets.gains.damping_ratio_com)
            : MatrixXd(targets.gains.damping_com.asDiagonal());
    out.force_com = impedance_force(out.error_com, jac.j2 * s.gamma_dot, k2, d2);
    tau += h.jbar[1].transpose() * out.force_com;
  }
  const double elbow_rate = (jac.j3 * s.gamma_dot)(0);
  out.force_elbow = -targets.gains.stiffness_elbow * (s.gamma[3 + p.elbow_joint] - targets.elbow) -
                    targets.gains.damping_elbow * elbow_rate;
  tau += h.jbar[2].transpose() * Eigen::Matrix<double, 1, 1>(out.force_elbow);

  out.tau_mu = VectorXd::Zero(n);
  if (opt.coriolis_decoupling) {
    // Jbar' along the current velocity: the same hierarchy on dual numbers.
    const VecX<Dual> gd = ad::seed(s.gamma, s.gamma_dot);
    const TaskJacobians<Dual> jd = task_jacobians<Dual>(gd, p);
    MatX<Dual> mhd = reduced_mass_matrix<Dual>(gd, p);
    if (opt.admittance && opt.effective_inertia) {
      mhd.topRows(3).setZero();
      mhd.leftCols(3).setZero();
      for (int i = 0; i < 3; ++i) mhd(i, i) = Dual(opt.adm.mass[i]);
    }
    const Hierarchy<Dual> hd = build_hierarchy<Dual>(mhd, task_list(jd));
    const MatrixXd mu = transformed_coriolis(h.jbar_ext, ad::tangents(hd.jbar_ext), mh, ch);
    out.tau_mu = coriolis_decoupling(h, mu, out.nu);
    tau += out.tau_mu;
  }

  if (opt.admittance) {
    tau.head<3>() -= d.g.head<3>();
    const ReducedBlocks b = split_blocks(d);
    out.platform_accel =
        (tau.head<3>() - opt.adm.damping.cwiseProduct(s.platform_velocity())).cwiseQuotient(opt.adm.mass);
    tau.tail(n - 3) += b.m_pm * out.platform_accel + b.c_pm * s.platform_velocity();
  }
  out.tau = tau;
  return out;
}

// ---------------------------------------------------------------------------
// Admittance interface M_adm x'' + D_adm x' = tau_p, advanced exactly for a
// torque held over the step. Per axis, with time constant T = M / D and
// terminal velocity v_inf = tau / D:
//   v(dt) = v_inf + (v0 - v_inf) e^(-dt/T)
//   x(dt) = x0 + v_inf dt + (v0 - v_inf) T (1 - e^(-dt/T))

struct AdmittanceState {
  Vector3d position = Vector3d::Zero();
  Vector3d velocity = Vector3d::Zero();
};

inline AdmittanceState admittance_update(const Vector3d& tau_p, const AdmittanceState& s,
                                         const AdmittanceParams& adm, double dt) {
  AdmittanceState out;
  for (int i = 0; i < 3; ++i) {
    const double tc = adm.mass[i] / adm.damping[i];
    const double v_inf = tau_p[i] / adm.damping[i];
    const double decay = -std::expm1(-dt / tc);  // 1 - e^(-dt/T)
    const double dv = s.velocity[i] - v_inf;
    out.velocity[i] = v_inf + dv * (1.0 - decay);
    out.position[i] = s.position[i] + v_inf * dt + dv * tc * decay;
  }
  return out;
}

// Sampled-data controller owning the admittance state of the platform.
class WholeBodyController {
 public:
  WholeBodyController(const SystemParams& p, TaskTargets targets, ControlOptions opt)
      : params_(p), targets_(std::move(targets)), opt_(opt) {}

  void set_params(const SystemParams& p) { params_ = p; }
  void set_targets(const TaskTargets& t) { targets_ = t; }
  const TaskTargets& targets() const { return targets_; }
  const ControlOptions& options() const { return opt_; }
  void reset_admittance(const Vector3d& x_p, const Vector3d& xdot_p = Vector3d::Zero()) {
    adm_state_ = {x_p, xdot_p};
  }
  const AdmittanceState& admittance_state() const { return adm_state_; }

  // gamma's platform part comes from the admittance state when it is active.
  ControlOutput compute(const ReducedState& measured) const {
    ReducedState s = measured;
    if (opt_.admittance) {
      s.gamma.head<3>() = adm_state_.position;
      s.gamma_dot.head<3>() = adm_state_.velocity;
    }
    return control_law(s, targets_, params_, opt_);
  }

  void advance(const ControlOutput& u, double dt) {
    if (opt_.admittance) adm_state_ = admittance_update(u.tau_p(), adm_state_, opt_.adm, dt);
  }

 private:
  SystemParams params_;
  TaskTargets targets_;
  ControlOptions opt_;
  AdmittanceState adm_state_;
};

}  // namespace sam::control

#endif  // SAM_CONTROL_CONTROLLER_HPP_
