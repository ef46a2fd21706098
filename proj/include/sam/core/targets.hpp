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

#ifndef SAM_CORE_TARGETS_HPP_
#define SAM_CORE_TARGETS_HPP_

#include <string>
#include <vector>

#include "sam/core/common.hpp"

namespace sam {

using Vector6d = Eigen::Matrix<double, 6, 1>;

struct Pose {
  Vector3d position = Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
};

// Impedance gains of the three tasks. Stiffness and damping of tasks 2 and 3
// are diagonal; task-1 damping follows from `damping_ratio` and the task
// inertia at run time.
struct TaskGains {
  Vector6d stiffness_ee = (Vector6d() << 500, 500, 500, 50, 50, 50).finished();
  double damping_ratio_ee = 1.0;
  Vector3d stiffness_com = Vector3d::Constant(200.0);
  // Task-2 damping from the task inertia like task 1; a ratio <= 0 selects
  // the fixed diagonal `damping_com` instead.
  double damping_ratio_com = 1.0;
  Vector3d damping_com = Vector3d::Constant(4.0);
  double stiffness_elbow = 0.0;
  double damping_elbow = 4.0;
};

struct TaskTargets {
  Pose ee;
  // Only x and y are meaningful targets (zero: below the hook); z holds the
  // height at which the COM is kept.
  Vector3d com = Vector3d::Zero();
  double elbow = 0.0;  // only used with a nonzero elbow stiffness
  TaskGains gains;
};

inline std::vector<std::string> validate_gains(const TaskGains& g) {
  std::vector<std::string> out;
  if (!(g.stiffness_ee.array() > 0.0).all()) out.push_back("stiffness_ee must be positive");
  if (!(g.damping_ratio_ee > 0.0)) out.push_back("damping_ratio_ee must be positive");
  if (!(g.stiffness_com.array() > 0.0).all()) out.push_back("stiffness_com must be positive");
  if (!(g.damping_com.array() > 0.0).all()) out.push_back("damping_com must be positive");
  if (!(g.stiffness_elbow >= 0.0)) out.push_back("stiffness_elbow must be non-negative");
  if (!(g.damping_elbow > 0.0)) out.push_back("damping_elbow must be positive");
  return out;
}

}  // namespace sam

#endif  // SAM_CORE_TARGETS_HPP_
