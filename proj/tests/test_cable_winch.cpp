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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "sam/kinematics/cable.hpp"
#include "sam/winch/winch.hpp"
#include "support.hpp"

namespace sam {
namespace {

using testing::Rng;

Vector3d sample_platform(Rng& rng) {
  return Vector3d(rng.uniform(-0.15, 0.15), rng.uniform(-0.15, 0.15), rng.uniform(-1.1, -0.7));
}

TEST(CableIk, SymmetricPointHasEqualLengths) {
  const auto p = default_params();
  const Vector3d l = cable_ik(Vector3d(0.0, 0.0, -0.95), p);
  // Vertical drop 0.85 m to the attachment plane, 0.3 m radius.
  const double expected = std::sqrt(0.85 * 0.85 + 0.09);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(l[i], expected, 1e-15);
}

TEST(CableIk, RoundTripThroughForwardSolve) {
  const auto p = default_params();
  Rng rng(60);
  for (int k = 0; k < testing::kSamples; ++k) {
    const Vector3d x = sample_platform(rng);
    EXPECT_LE((cable_fk(cable_ik(x, p), p) - x).norm(), 1e-9);
  }
}

TEST(CableIk, CommandedLengthsHangLevelWhenComIsUnderHook) {
  // The controller keeps the COM under the hook; with that COM the lengths
  // from cable_ik must leave the free-hanging platform level.
  const auto p = default_params();
  Rng rng(61);
  for (int k = 0; k < 200; ++k) {
    const Vector3d x = sample_platform(rng);
    const Vector3d com_offset(-x.x(), -x.y(), rng.uniform(-0.4, -0.1));
    const HangingPose h = hanging_pose(cable_ik(x, p), com_offset, p);
    EXPECT_LE(std::abs(h.roll), 1e-9);
    EXPECT_LE(std::abs(h.pitch), 1e-9);
    EXPECT_LE((h.position - x).norm(), 1e-9);
  }
}

TEST(CableIk, OffsetComTiltsThePlatform) {
  const auto p = default_params();
  const Vector3d x(0.0, 0.0, -0.95);
  const HangingPose h = hanging_pose(cable_ik(x, p), Vector3d(0.05, 0.0, -0.2), p);
  EXPECT_GT(std::abs(h.pitch), 1e-3);
  // The suspended body pivots until its COM hangs below A.
  const Vector3d com = h.position + detail::roll_pitch<double>(h.roll, h.pitch) * Vector3d(0.05, 0.0, -0.2);
  EXPECT_LE(com.head<2>().norm(), 1e-12);
}

TEST(CableIk, TooLongCableOneThrows) {
  const auto p = default_params();
  // Straight below the first attachment, 1.4 m down.
  const Vector3d x(-0.3, 0.0, -1.5);
  ASSERT_NEAR(cable_lengths(x, p)[0], 1.4, 1e-15);
  try {
    cable_ik(x, p);
    FAIL() << "expected CableRangeError";
  } catch (const CableRangeError& e) {
    EXPECT_EQ(e.cable(), 0);
    EXPECT_NE(std::string(e.what()).find("cable 1"), std::string::npos);
  }
}

TEST(CableIk, BoundsAreInclusive) {
  const auto p = default_params();
  // Cable 1 spans (0.5, 0, -1.2): exactly 1.3 m.
  const Vector3d upper(0.2, 0.0, -1.3);
  ASSERT_EQ(cable_lengths(upper, p)[0], 1.3);
  EXPECT_NO_THROW(cable_ik(upper, p));
  EXPECT_TRUE(feasibility_report(upper, p).ok());
  // Cable 1 straight up 0.5 m.
  const Vector3d lower(-0.3, 0.0, -0.6);
  ASSERT_EQ(cable_lengths(lower, p)[0], 0.5);
  EXPECT_TRUE(feasibility_report(lower, p).ok());
  // One step past either bound fails.
  EXPECT_FALSE(feasibility_report(upper + Vector3d(1e-9, 0, 0), p).ok());
  EXPECT_FALSE(feasibility_report(lower + Vector3d(0, 0, 1e-9), p).ok());
  EXPECT_THROW(cable_ik(lower + Vector3d(0, 0, 1e-9), p), CableRangeError);
}

TEST(Feasibility, ExtremeLateralPointNamesShortestViolator) {
  const auto p = default_params();
  const auto r = feasibility_report(Vector3d(0.0, -1.3, -0.3), p);
  ASSERT_EQ(r.violations.size(), 2u);
  EXPECT_NEAR(r.lengths[0], 1.3490737563232043, 1e-14);
  EXPECT_NEAR(r.lengths[1], 1.0698131542695377, 1e-14);
  EXPECT_NEAR(r.lengths[2], 1.5797151056288163, 1e-14);
  EXPECT_EQ(r.shortest_violating(), 0);
  EXPECT_EQ(r.describe(), "cable 1 needs " + format_double(r.lengths[0]) + " m (limit 1.3 m); cable 3 needs " +
                              format_double(r.lengths[2]) + " m (limit 1.3 m)");
}

TEST(Feasibility, TooShortCableReported) {
  const auto p = default_params();
  const auto r = feasibility_report(Vector3d(-0.6, 0.0, -0.3), p);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].cable, 0);
  EXPECT_NEAR(r.violations[0].length, 0.3605551275463989, 1e-15);
  EXPECT_EQ(r.violations[0].bound, 0.5);
}

TEST(Winch, HoldsAtCommandedLength) {
  const auto p = default_params();
  const WinchParams w = winch_params(p);
  WinchState s = winch_at(Vector3d(0.0, 0.0, -0.95), p);
  const Vector3d l0 = s.lengths;
  for (int k = 0; k < 1000; ++k) s = servo_track(l0, s, 1e-3, w);
  EXPECT_EQ(s.lengths, l0);
  EXPECT_EQ(s.rates, Vector3d::Zero());
  EXPECT_FALSE(s.any_limit());
}

TEST(Winch, OutOfRangeCommandClampsAndPauses) {
  const WinchParams w = winch_params(default_params());
  WinchState s;
  s.lengths = Vector3d::Constant(1.25);
  const Vector3d cmd(1.4, 1.0, 1.25);
  for (int k = 0; k < 2000; ++k) s = servo_track(cmd, s, 1e-3, w);
  EXPECT_EQ(s.lengths[0], 1.3);
  EXPECT_TRUE(s.limit_flags[0]);
  EXPECT_FALSE(s.limit_flags[1]);
  EXPECT_FALSE(s.limit_flags[2]);
  EXPECT_EQ(s.rates[0], 0.0);
  // Before reaching the bound the flag stays clear.
  WinchState fresh;
  fresh.lengths = Vector3d::Constant(1.0);
  EXPECT_FALSE(servo_track(cmd, fresh, 1e-3, w).limit_flags[0]);
}

TEST(Winch, StepSettlesWithinFiveTimeConstants) {
  WinchParams w = winch_params(default_params());
  w.rate_max = std::numeric_limits<double>::infinity();
  WinchState s;
  s.lengths = Vector3d::Constant(0.9);
  const Vector3d cmd = Vector3d::Constant(0.95);
  const double dt = 1e-3;
  const int steps = static_cast<int>(std::lround(5.0 * w.time_constant / dt));
  for (int k = 0; k < steps; ++k) s = servo_track(cmd, s, dt, w);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LE(std::abs(cmd[i] - s.lengths[i]), 0.01 * 0.05);
    EXPECT_NEAR(cmd[i] - s.lengths[i], 0.05 * std::exp(-5.0), 1e-12);
  }
}

TEST(Winch, RateLimitedSlew) {
  const WinchParams w = winch_params(default_params());
  WinchState s;
  s.lengths = Vector3d::Constant(0.9);
  const Vector3d cmd = Vector3d::Constant(1.2);
  for (int k = 0; k < 500; ++k) s = servo_track(cmd, s, 1e-3, w);
  // 0.3 m at 0.2 m/s takes 1.5 s: after 0.5 s the cable has moved 0.1 m.
  EXPECT_NEAR(s.lengths[0], 1.0, 1e-12);
  EXPECT_NEAR(s.rates[0], 0.2, 1e-9);
}

TEST(Winch, RandomCommandsRespectRangeAndRate) {
  const WinchParams w = winch_params(default_params());
  Rng rng(62);
  WinchState s;
  for (int k = 0; k < 20000; ++k) {
    const Vector3d cmd = rng.uniform(3, 0.2, 1.6);
    s = servo_track(cmd, s, 1e-3, w);
    for (int i = 0; i < 3; ++i) {
      EXPECT_GE(s.lengths[i], w.length_min);
      EXPECT_LE(s.lengths[i], w.length_max);
      EXPECT_LE(std::abs(s.rates[i]), w.rate_max * (1.0 + 1e-9));
    }
  }
}

TEST(Winch, IdealServoFollowsClampedCommand) {
  WinchParams w = winch_params(default_params());
  w.time_constant = 0.0;
  w.rate_max = std::numeric_limits<double>::infinity();
  Rng rng(63);
  WinchState s;
  for (int k = 0; k < 1000; ++k) {
    const Vector3d cmd = rng.uniform(3, 0.2, 1.6);
    s = servo_track(cmd, s, 1e-3, w);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(s.lengths[i], std::clamp(cmd[i], 0.5, 1.3));
  }
}

}  // namespace
}  // namespace sam
