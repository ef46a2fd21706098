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

#ifndef SAM_CORE_COMMON_HPP_
#define SAM_CORE_COMMON_HPP_

#include <ceres/jet.h>

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>

namespace sam {

template <typename T>
using Vec2 = Eigen::Matrix<T, 2, 1>;
template <typename T>
using Mat2 = Eigen::Matrix<T, 2, 2>;
template <typename T>
using Vec3 = Eigen::Matrix<T, 3, 1>;
template <typename T>
using Mat3 = Eigen::Matrix<T, 3, 3>;
template <typename T>
using VecX = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using MatX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::VectorXd;

// First-order forward-mode dual number. Evaluating a templated function at
// Dual(x, dx) yields f(x) in `.a` and the directional derivative Df(x)[dx] in
// `.v[0]`.
using Dual = ceres::Jet<double, 1>;

// Raised when a matrix that must be inverted is numerically rank deficient.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by integrators when the state leaves the configured bound.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double time, const std::string& what)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

namespace ad {

inline double value(double x) { return x; }
inline double value(const Dual& x) { return x.a; }
inline double tangent(double) { return 0.0; }
inline double tangent(const Dual& x) { return x.v[0]; }

// Dual vector x + eps * dx.
inline VecX<Dual> seed(const VectorXd& x, const VectorXd& dx) {
  VecX<Dual> out(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    out[i] = Dual(x[i]);
    out[i].v[0] = dx[i];
  }
  return out;
}

// Dual vector seeded along the k-th unit direction.
inline VecX<Dual> seed_unit(const VectorXd& x, Index k) {
  VecX<Dual> out(x.size());
  for (Index i = 0; i < x.size(); ++i) out[i] = Dual(x[i]);
  out[k].v[0] = 1.0;
  return out;
}

template <typename Derived>
MatrixXd values(const Eigen::MatrixBase<Derived>& m) {
  MatrixXd out(m.rows(), m.cols());
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) out(r, c) = value(m(r, c));
  return out;
}

template <typename Derived>
MatrixXd tangents(const Eigen::MatrixBase<Derived>& m) {
  MatrixXd out(m.rows(), m.cols());
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) out(r, c) = tangent(m(r, c));
  return out;
}

// Forward-mode Jacobian of f: R^n -> R^k at x, one directional pass per input.
template <typename F>
MatrixXd jacobian(F&& f, const VectorXd& x) {
  MatrixXd out;
  for (Index k = 0; k < x.size(); ++k) {
    const VecX<Dual> y = f(seed_unit(x, k));
    if (k == 0) out.resize(y.size(), x.size());
    for (Index i = 0; i < y.size(); ++i) out(i, k) = y[i].v[0];
  }
  return out;
}

}  // namespace ad

// Scale-invariant rank test: smallest over largest singular value.
inline double inverse_condition(const MatrixXd& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s[0] == 0.0) return 0.0;
  return s[s.size() - 1] / s[0];
}

inline constexpr double kSingularRatio = 1e-8;

}  // namespace sam

#endif  // SAM_CORE_COMMON_HPP_
