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

// Position-controlled winch servos. Each cable follows its commanded length
// through a first-order lag with a rate limit. Commands beyond the calibrated
// range are clamped and the motor pauses at the bound, as the limit
// interlock on the hardware does.

#ifndef SAM_WINCH_WINCH_HPP_
#define SAM_WINCH_WINCH_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "sam/core/common.hpp"
#include "sam/core/params.hpp"
#include "sam/kinematics/cable.hpp"

namespace sam {

struct WinchParams {
  double time_constant = 0.02;  // s; 0 tracks the command within one step
  double rate_max = 0.2;        // m/s; infinity disables the limit
  double length_min = 0.5;
  double length_max = 1.3;
  double limit_band = 1e-6;  // m; within this of a bound the interlock trips
};

inline WinchParams winch_params(const SystemParams& p) {
  WinchParams w;
  w.length_min = p.cable_length_min;
  w.length_max = p.cable_length_max;
  return w;
}

struct WinchState {
  Vector3d lengths = Vector3d::Constant(0.9);
  Vector3d rates = Vector3d::Zero();
  std::array<bool, 3> limit_flags{false, false, false};

  bool any_limit() const { return limit_flags[0] || limit_flags[1] || limit_flags[2]; }
};

inline WinchState servo_track(const Vector3d& l_des, const WinchState& s, double dt,
                              const WinchParams& w) {
  WinchState out;
  for (int i = 0; i < 3; ++i) {
    const double target = std::clamp(l_des[i], w.length_min, w.length_max);
    const double l0 = s.lengths[i];
    double l1 = w.time_constant > 0.0 ? target + (l0 - target) * std::exp(-dt / w.time_constant)
                                      : target;
    const double max_step = w.rate_max * dt;
    if (std::isfinite(max_step)) l1 = l0 + std::clamp(l1 - l0, -max_step, max_step);
    const bool outward = l_des[i] > w.length_max || l_des[i] < w.length_min;
    // The lag only approaches a clamped target; snap once inside the band.
    if (outward && std::abs(l1 - target) <= w.limit_band) l1 = target;
    l1 = std::clamp(l1, w.length_min, w.length_max);
    out.lengths[i] = l1;
    out.rates[i] = (l1 - l0) / dt;
    out.limit_flags[i] = outward && l1 == target;
  }
  return out;
}

inline WinchState winch_at(const Vector3d& x_p, const SystemParams& p) {
  WinchState s;
  s.lengths = cable_ik(x_p, p);
  return s;
}

}  // namespace sam

#endif  // SAM_WINCH_WINCH_HPP_
