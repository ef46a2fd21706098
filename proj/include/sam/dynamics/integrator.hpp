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

// Fixed-step classical Runge-Kutta integration of first-order systems.

#ifndef SAM_DYNAMICS_INTEGRATOR_HPP_
#define SAM_DYNAMICS_INTEGRATOR_HPP_

#include <cmath>
#include <concepts>
#include <limits>
#include <string>
#include <vector>

#include "sam/core/common.hpp"

namespace sam {

// Per-step health numbers; fields a model does not have stay NaN.
struct Diagnostics {
  double energy = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();             // loop closure, m
  double constraint_velocity = std::numeric_limits<double>::quiet_NaN();  // |A q-dot|
};

template <typename S>
concept OdeSystem = requires(const S& s, double t, const VectorXd& x) {
  { s.derivative(t, x) } -> std::convertible_to<VectorXd>;
};

template <typename S>
concept DiagnosedSystem = OdeSystem<S> && requires(const S& s, double t, const VectorXd& x) {
  { s.diagnostics(t, x) } -> std::convertible_to<Diagnostics>;
};

template <OdeSystem S>
VectorXd rk4_step(const S& sys, double t, const VectorXd& x, double dt) {
  const VectorXd k1 = sys.derivative(t, x);
  const VectorXd k2 = sys.derivative(t + 0.5 * dt, x + 0.5 * dt * k1);
  const VectorXd k3 = sys.derivative(t + 0.5 * dt, x + 0.5 * dt * k2);
  const VectorXd k4 = sys.derivative(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct IntegrationOptions {
  double dt = 1e-3;
  double horizon = 1.0;
  double state_bound = 1e6;  // infinity norm
  bool project = false;      // call sys.project(x) after each step when available
};

struct Trajectory {
  std::vector<double> t;
  std::vector<VectorXd> x;
  std::vector<Diagnostics> diagnostics;
  // Diagnostics of the raw RK4 result, before any projection.
  std::vector<Diagnostics> pre_projection;

  const VectorXd& final_state() const { return x.back(); }
};

inline std::size_t step_count(double horizon, double dt) {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

template <OdeSystem S>
Trajectory integrate(const S& sys, const VectorXd& x0, const IntegrationOptions& opt) {
  if (!(opt.dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  Trajectory out;
  const std::size_t n = step_count(opt.horizon, opt.dt);
  out.t.reserve(n + 1);
  out.x.reserve(n + 1);
  auto diag = [&](double t, const VectorXd& x) {
    if constexpr (DiagnosedSystem<S>) return sys.diagnostics(t, x);
    return Diagnostics{};
  };
  VectorXd x = x0;
  out.t.push_back(0.0);
  out.x.push_back(x);
  out.diagnostics.push_back(diag(0.0, x));
  out.pre_projection.push_back(out.diagnostics.back());
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * opt.dt;
    const double t1 = static_cast<double>(k + 1) * opt.dt;
    x = rk4_step(sys, t, x, opt.dt);
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > opt.state_bound)
      throw DivergenceError(t1, "integrate: state left bound at t = " + std::to_string(t1) + " s");
    Diagnostics raw = diag(t1, x);
    if constexpr (requires { sys.project(x); }) {
      if (opt.project) x = sys.project(x);
    }
    out.t.push_back(t1);
    out.x.push_back(x);
    out.pre_projection.push_back(raw);
    out.diagnostics.push_back(opt.project ? diag(t1, x) : raw);
  }
  return out;
}

}  // namespace sam

#endif  // SAM_DYNAMICS_INTEGRATOR_HPP_
