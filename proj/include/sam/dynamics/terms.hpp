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

#ifndef SAM_DYNAMICS_TERMS_HPP_
#define SAM_DYNAMICS_TERMS_HPP_

#include <vector>

#include "sam/core/common.hpp"

namespace sam {

enum class CoordinateSpace { kClosedChain, kSerial, kReduced };

// M(x) x'' + C(x, x') x' + g(x) = tau in one coordinate space.
struct DynamicsTerms {
  CoordinateSpace space = CoordinateSpace::kClosedChain;
  MatrixXd M;
  MatrixXd C;
  VectorXd g;
};

// Coriolis matrix from Christoffel symbols of the first kind:
//   C_ij = sum_k 1/2 (dM_ij/dx_k + dM_ik/dx_j - dM_jk/dx_i) xdot_k.
// `dm[k]` is dM/dx_k; an empty matrix stands for a coordinate M does not
// depend on.
inline MatrixXd christoffel_coriolis(const std::vector<MatrixXd>& dm, const VectorXd& xdot) {
  const Index n = xdot.size();
  MatrixXd c = MatrixXd::Zero(n, n);
  MatrixXd mdot = MatrixXd::Zero(n, n);  // sum_k dM/dx_k xdot_k
  for (Index k = 0; k < n; ++k)
    if (dm[k].size() != 0) mdot += dm[k] * xdot[k];
  c = 0.5 * mdot;
  // 1/2 (dM_ik/dx_j - dM_jk/dx_i) xdot_k  =  1/2 (W_ij - W_ji), W_ij = (dM/dx_j xdot)_i
  MatrixXd w = MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    if (dm[j].size() != 0) w.col(j) = dm[j] * xdot;
  c += 0.5 * (w - w.transpose());
  return c;
}

}  // namespace sam

#endif  // SAM_DYNAMICS_TERMS_HPP_
