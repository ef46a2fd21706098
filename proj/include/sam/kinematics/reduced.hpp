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

// Kinematics of the 3D control model. The platform translates without
// rotating (its roll and pitch are held at zero by the cables, yaw by the
// propellers), so gamma = [x_c, y_c, z_c, q_m] with x_c the platform centre
// relative to the hook A, z up.
//
// Task maps:
//   x_e   = f1(gamma)  end-effector pose
//   x_com = f2(gamma)  centre of mass of platform, arm and payload
//   elbow = q_m[elbow_joint]

#ifndef SAM_KINEMATICS_REDUCED_HPP_
#define SAM_KINEMATICS_REDUCED_HPP_

#include <cmath>
#include <vector>

#include "sam/core/common.hpp"
#include "sam/core/params.hpp"
#include "sam/core/targets.hpp"

namespace sam {

template <typename T>
Mat3<T> skew(const Vec3<T>& v) {
  Mat3<T> s;
  s << T(0.0), -v.z(), v.y(), v.z(), T(0.0), -v.x(), -v.y(), v.x(), T(0.0);
  return s;
}

// Rotation by `angle` about the unit `axis`.
template <typename T>
Mat3<T> axis_rotation(const Vector3d& axis, const T& angle) {
  using std::cos;
  using std::sin;
  const Mat3<T> k = skew<T>(axis.cast<T>());
  return Mat3<T>::Identity() + k * sin(angle) + (k * k) * (T(1.0) - cos(angle));
}

template <typename T>
struct ArmFrames {
  std::vector<Vec3<T>> joint_position;  // world, on the joint axis
  std::vector<Vec3<T>> joint_axis;      // world
  std::vector<Mat3<T>> link_rotation;   // world orientation of each link frame
  std::vector<Vec3<T>> link_com;        // world
  Vec3<T> ee_position;
  Mat3<T> ee_rotation;
};

template <typename T>
ArmFrames<T> arm_frames(const VecX<T>& gamma, const SystemParams& p) {
  const std::size_t m = p.arm.size();
  ArmFrames<T> f;
  f.joint_position.reserve(m);
  f.joint_axis.reserve(m);
  f.link_rotation.reserve(m);
  f.link_com.reserve(m);
  Vec3<T> pos = gamma.template head<3>() + p.arm_mount.cast<T>();
  Mat3<T> rot = p.arm_mount_rotation.cast<T>();
  for (std::size_t i = 0; i < m; ++i) {
    const auto& j = p.arm[i];
    pos = pos + rot * j.origin.cast<T>();
    f.joint_position.push_back(pos);
    f.joint_axis.push_back(rot * j.axis.cast<T>());
    rot = rot * axis_rotation<T>(j.axis, gamma[3 + static_cast<Index>(i)]);
    f.link_rotation.push_back(rot);
    f.link_com.push_back(pos + rot * j.com.cast<T>());
  }
  f.ee_position = pos + rot * p.flange.cast<T>();
  f.ee_rotation = rot;
  return f;
}

inline Pose fk_end_effector(const VectorXd& gamma, const SystemParams& p) {
  const auto f = arm_frames<double>(gamma, p);
  Eigen::Quaterniond q(f.ee_rotation);
  q.normalize();
  return {f.ee_position, q};
}

template <typename T>
Vec3<T> com_from_frames(const ArmFrames<T>& f, const VecX<T>& gamma, const SystemParams& p) {
  Vec3<T> acc = gamma.template head<3>() * p.platform_mass;
  for (std::size_t i = 0; i < p.arm.size(); ++i) acc += f.link_com[i] * p.arm[i].mass;
  acc += f.ee_position * p.payload_mass;
  return acc / p.suspended_mass();
}

template <typename T>
Vec3<T> fk_com(const VecX<T>& gamma, const SystemParams& p) {
  return com_from_frames(arm_frames<T>(gamma, p), gamma, p);
}

// Orientation error as the vector part of q_cur * q_des^-1, on the short arc.
inline Vector3d orientation_error(const Eigen::Quaterniond& current,
                                  const Eigen::Quaterniond& desired) {
  Eigen::Quaterniond e = current * desired.conjugate();
  if (e.w() < 0.0) e.coeffs() = -e.coeffs();
  return e.vec();
}

// Pose error [position; orientation] of task 1.
inline Vector6d pose_error(const Pose& current, const Pose& desired) {
  Vector6d e;
  e << current.position - desired.position, orientation_error(current.orientation, desired.orientation);
  return e;
}

template <typename T>
struct TaskJacobians {
  MatX<T> j1;  // 6 x n: [linear; angular] end-effector velocity, world frame
  MatX<T> j2;  // 3 x n: COM velocity
  MatX<T> j3;  // 1 x n: elbow joint rate
  bool rank_deficient = false;

  MatX<T> stacked() const {
    MatX<T> j(j1.rows() + j2.rows() + j3.rows(), j1.cols());
    j << j1, j2, j3;
    return j;
  }
};

// Geometric Jacobian of a world point carried by link `last` and all links
// before it; linear rows only, arm columns only.
template <typename T>
MatX<T> arm_point_jacobian(const ArmFrames<T>& f, const Vec3<T>& point, std::size_t last) {
  MatX<T> j = MatX<T>::Zero(3, static_cast<Index>(f.joint_axis.size()));
  for (std::size_t k = 0; k <= last; ++k)
    j.col(static_cast<Index>(k)) = f.joint_axis[k].cross(point - f.joint_position[k]);
  return j;
}

template <typename T>
MatX<T> arm_angular_jacobian(const ArmFrames<T>& f, std::size_t last) {
  MatX<T> j = MatX<T>::Zero(3, static_cast<Index>(f.joint_axis.size()));
  for (std::size_t k = 0; k <= last; ++k) j.col(static_cast<Index>(k)) = f.joint_axis[k];
  return j;
}

template <typename T>
TaskJacobians<T> task_jacobians(const VecX<T>& gamma, const SystemParams& p) {
  const auto f = arm_frames<T>(gamma, p);
  const Index m = p.arm_dof();
  const Index n = 3 + m;
  const std::size_t last = p.arm.size() - 1;
  TaskJacobians<T> out;
  out.j1 = MatX<T>::Zero(6, n);
  out.j1.template block<3, 3>(0, 0).setIdentity();
  out.j1.block(0, 3, 3, m) = arm_point_jacobian(f, f.ee_position, last);
  out.j1.block(3, 3, 3, m) = arm_angular_jacobian(f, last);

  out.j2 = MatX<T>::Zero(3, n);
  out.j2.template block<3, 3>(0, 0).setIdentity();
  MatX<T> arm = arm_point_jacobian(f, f.ee_position, last) * p.payload_mass;
  for (std::size_t i = 0; i < p.arm.size(); ++i)
    arm += arm_point_jacobian(f, f.link_com[i], i) * p.arm[i].mass;
  out.j2.block(0, 3, 3, m) = arm / p.suspended_mass();

  out.j3 = MatX<T>::Zero(1, n);
  out.j3(0, 3 + p.elbow_joint) = T(1.0);

  const MatrixXd j = ad::values(out.stacked());
  out.rank_deficient = inverse_condition(ad::values(out.j1)) < kSingularRatio ||
                       (j.rows() == j.cols() && inverse_condition(j) < kSingularRatio);
  return out;
}

}  // namespace sam

#endif  // SAM_KINEMATICS_REDUCED_HPP_
