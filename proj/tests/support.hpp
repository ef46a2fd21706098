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


// Shared samplers and finite-difference helpers for the test suites.

#ifndef SAM_TESTS_SUPPORT_HPP_
#define SAM_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "sam/core/common.hpp"
#include "sam/core/params.hpp"

namespace sam::testing {

constexpr int kSamples = 1000;

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 20260314) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  VectorXd uniform(Index n, double lo, double hi) {
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Central differences of a vector function, one column per input.
inline MatrixXd central_jacobian(const std::function<VectorXd(const VectorXd&)>& f, const VectorXd& x,
                                 double h = 1e-6) {
  const VectorXd f0 = f(x);
  MatrixXd j(f0.size(), x.size());
  for (Index k = 0; k < x.size(); ++k) {
    VectorXd xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    j.col(k) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return j;
}

inline double central_derivative(const std::function<double(double)>& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Relative error with a floor on the reference scale, so entries that are
// exactly zero analytically compare against the matrix scale.
template <typename A, typename B>
double rel_err(const A& actual, const B& expected, double floor = 1e-8) {
  const double scale = std::max(MatrixXd(expected).cwiseAbs().maxCoeff(), floor);
  return (MatrixXd(actual) - MatrixXd(expected)).cwiseAbs().maxCoeff() / scale;
}

// Planar independent coordinates around the hanging configuration.
inline VectorXd planar_eta_sample(Rng& rng, const SystemParams& p) {
  const Index m = p.planar_arm_dof();
  while (true) {
    VectorXd eta(4 + m);
    const double q1 = rng.uniform(-0.15, 0.15);
    const Vector2d a(p.l1 * std::sin(q1), -p.l1 * std::cos(q1));
    eta[0] = q1;
    eta[1] = a.x() + rng.uniform(-0.12, 0.12);
    eta[2] = rng.uniform(-0.2, 0.2);
    eta[3] = a.y() - rng.uniform(0.75, 1.05);
    eta.tail(m) = rng.uniform(m, -1.2, 1.2);
    // Keep both cables well inside their range.
    const Vector2d c(eta[1], eta[3]);
    const Eigen::Rotation2Dd r(eta[2]);
    const double lb = (c + r * p.planar.attach_b - a).norm();
    const double le = (c + r * p.planar.attach_e - a).norm();
    if (lb > 0.6 && lb < 1.2 && le > 0.6 && le < 1.2) return eta;
  }
}

// gamma around the default home pose.
inline VectorXd home_arm() { return (VectorXd(7) << 0.0, 0.6, 0.0, -1.2, 0.0, 0.6, 0.0).finished(); }

inline VectorXd gamma_sample(Rng& rng, const SystemParams& p, double spread = 0.8) {
  VectorXd g(p.gamma_dim());
  g.head<3>() = Vector3d(rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), rng.uniform(-1.05, -0.85));
  VectorXd arm = p.arm_dof() == 7 ? home_arm() : VectorXd::Zero(p.arm_dof());
  g.tail(p.arm_dof()) = arm + rng.uniform(p.arm_dof(), -spread, spread);
  return g;
}

}  // namespace sam::testing

#endif  // SAM_TESTS_SUPPORT_HPP_
