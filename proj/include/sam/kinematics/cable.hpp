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

// Rigging-cable kinematics. All three cables run from the hook A to the
// attachment points W_i = C + R a_i. With the platform held level the vector
// loop A -> C -> W_i gives
//
//   l_i = | x_p + a_i |,   x_p = C - A.

#ifndef SAM_KINEMATICS_CABLE_HPP_
#define SAM_KINEMATICS_CABLE_HPP_

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sam/core/common.hpp"
#include "sam/core/params.hpp"
#include "sam/kinematics/reduced.hpp"

namespace sam {

class CableRangeError : public std::runtime_error {
 public:
  CableRangeError(int cable, double length, const std::string& what)
      : std::runtime_error(what), cable_(cable), length_(length) {}
  int cable() const { return cable_; }  // 0-based
  double length() const { return length_; }

 private:
  int cable_;
  double length_;
};

inline Vector3d cable_lengths(const Vector3d& x_p, const SystemParams& p) {
  Vector3d l;
  for (int i = 0; i < 3; ++i) l[i] = (x_p + p.cable_attach[i]).norm();
  return l;
}

inline bool length_in_range(double l, const SystemParams& p) {
  return l >= p.cable_length_min && l <= p.cable_length_max;
}

// Level-platform inverse kinematics; throws for the first cable out of range.
inline Vector3d cable_ik(const Vector3d& x_p, const SystemParams& p) {
  const Vector3d l = cable_lengths(x_p, p);
  for (int i = 0; i < 3; ++i) {
    if (!length_in_range(l[i], p)) {
      throw CableRangeError(i, l[i],
                            "cable " + std::to_string(i + 1) + " length " + format_double(l[i]) +
                                " m outside [" + format_double(p.cable_length_min) + ", " +
                                format_double(p.cable_length_max) + "] m");
    }
  }
  return l;
}

struct CableViolation {
  int cable = 0;  // 0-based
  double length = 0.0;
  double bound = 0.0;  // the limit it crossed
};

struct FeasibilityReport {
  Vector3d lengths = Vector3d::Zero();
  std::vector<CableViolation> violations;

  bool ok() const { return violations.empty(); }
  // Index of the shortest violating cable, or -1.
  int shortest_violating() const {
    int best = -1;
    for (const auto& v : violations)
      if (best < 0 || v.length < lengths[best]) best = v.cable;
    return best;
  }
  std::string describe() const {
    if (ok()) return "ok";
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += "cable " + std::to_string(v.cable + 1) + " needs " + format_double(v.length) +
             " m (limit " + format_double(v.bound) + " m)";
    }
    return out;
  }
};

inline FeasibilityReport feasibility_report(const Vector3d& x_p, const SystemParams& p) {
  FeasibilityReport r;
  r.lengths = cable_lengths(x_p, p);
  for (int i = 0; i < 3; ++i) {
    const double l = r.lengths[i];
    if (l < p.cable_length_min) r.violations.push_back({i, l, p.cable_length_min});
    if (l > p.cable_length_max) r.violations.push_back({i, l, p.cable_length_max});
  }
  return r;
}

namespace detail {

template <typename T>
Mat3<T> roll_pitch(const T& roll, const T& pitch) {
  return axis_rotation<T>(Vector3d::UnitX(), roll) * axis_rotation<T>(Vector3d::UnitY(), pitch);
}

// Damped Newton on a square residual; returns the converged unknowns.
template <typename F>
VectorXd newton_solve(F&& residual, VectorXd x, double tol, int max_iter, const char* who) {
  for (int it = 0; it < max_iter; ++it) {
    const VectorXd r = ad::values(residual(ad::seed(x, VectorXd::Zero(x.size()))));
    if (r.cwiseAbs().maxCoeff() < tol) return x;
    const MatrixXd j = ad::jacobian(residual, x);
    if (inverse_condition(j) < kSingularRatio) throw SingularityError(std::string(who) + ": singular Jacobian");
    VectorXd step = j.partialPivLu().solve(r);
    double scale = 1.0;
    const double lim = 0.2;
    if (step.cwiseAbs().maxCoeff() > lim) scale = lim / step.cwiseAbs().maxCoeff();
    x -= scale * step;
  }
  const VectorXd r = ad::values(residual(ad::seed(x, VectorXd::Zero(x.size()))));
  if (r.cwiseAbs().maxCoeff() < tol) return x;
  throw std::runtime_error(std::string(who) + ": no convergence");
}

}  // namespace detail

// Level-platform forward kinematics: the x_p below the hook with the given
// lengths. Newton from a point straight below A.
inline Vector3d cable_fk(const Vector3d& lengths, const SystemParams& p) {
  auto residual = [&](const VecX<Dual>& x) {
    VecX<Dual> r(3);
    const Vec3<Dual> xp = x.head<3>();
    for (int i = 0; i < 3; ++i) {
      const Vec3<Dual> v = xp + p.cable_attach[i].cast<Dual>();
      r[i] = v.squaredNorm() - Dual(lengths[i] * lengths[i]);
    }
    return r;
  };
  const double mean = lengths.mean();
  const double r0 = p.cable_attach[0].head<2>().norm();
  VectorXd x0(3);
  x0 << 0.0, 0.0, -std::sqrt(std::max(mean * mean - r0 * r0, 1e-4)) - p.cable_attach[0].z();
  return detail::newton_solve(residual, x0, 1e-14, 60, "cable_fk");
}

struct HangingPose {
  Vector3d position;  // x_p
  double roll = 0.0;
  double pitch = 0.0;
};

// Free-hanging pose for given cable lengths: the suspended system pivots about
// A until its centre of mass, `com_offset` from C in the platform frame, lies
// straight below the hook.
inline HangingPose hanging_pose(const Vector3d& lengths, const Vector3d& com_offset,
                                const SystemParams& p) {
  auto residual = [&](const VecX<Dual>& x) {
    VecX<Dual> r(5);
    const Vec3<Dual> xp = x.head<3>();
    const Mat3<Dual> rot = detail::roll_pitch(x[3], x[4]);
    for (int i = 0; i < 3; ++i) {
      const Vec3<Dual> v = xp + rot * p.cable_attach[i].cast<Dual>();
      r[i] = v.squaredNorm() - Dual(lengths[i] * lengths[i]);
    }
    const Vec3<Dual> com = xp + rot * com_offset.cast<Dual>();
    r[3] = com.x();
    r[4] = com.y();
    return r;
  };
  VectorXd x0(5);
  x0 << cable_fk(lengths, p), 0.0, 0.0;
  // Start the level guess with the COM shifted under A.
  x0.head<2>() -= com_offset.head<2>();
  const VectorXd x = detail::newton_solve(residual, x0, 1e-14, 80, "hanging_pose");
  return {x.head<3>(), x[3], x[4]};
}

}  // namespace sam

#endif  // SAM_KINEMATICS_CABLE_HPP_
