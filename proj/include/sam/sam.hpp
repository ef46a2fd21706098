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


#ifndef SAM_SAM_HPP_
#define SAM_SAM_HPP_

#include "sam/control/controller.hpp"
#include "sam/core/common.hpp"
#include "sam/core/keyvalue.hpp"
#include "sam/core/params.hpp"
#include "sam/core/targets.hpp"
#include "sam/dynamics/integrator.hpp"
#include "sam/dynamics/planar.hpp"
#include "sam/dynamics/reduced.hpp"
#include "sam/dynamics/terms.hpp"
#include "sam/harness/scenario.hpp"
#include "sam/kinematics/cable.hpp"
#include "sam/kinematics/planar.hpp"
#include "sam/kinematics/reduced.hpp"
#include "sam/winch/winch.hpp"

#endif  // SAM_SAM_HPP_
