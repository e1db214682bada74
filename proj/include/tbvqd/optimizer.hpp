// Copyright 2026 The tbvqd Authors
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

// Derivative-free trust-region minimizer.
//
// Every iteration fits a full quadratic model to a central-difference stencil
// of half-width `stencil_width` around the current point (2n + n(n-1)/2 new
// evaluations), minimizes it inside a ball of radius `radius`, and accepts
// the step when the actual reduction is a reasonable fraction of the
// predicted one. The stencil half-width follows the trust radius, clamped to
// [min_stencil_width, stencil_width]. Setting both bounds equal fixes it,
// which is what noisy objectives want: a wide stencil keeps the finite
// differences above the noise floor.
//
// With `noisy` set the centre is re-evaluated every iteration and only the
// model step can be accepted, compared against that fresh centre value.
// Jumping to the lowest stencil sample would otherwise chase noise.
//
// The method is deterministic; any randomness lives in the objective.

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tbvqd/common.hpp"

namespace tbvqd {

struct OptimizerOptions {
  double initial_radius = 0.5;
  double max_radius = 2.0;
  double stencil_width = 0.2;
  double min_stencil_width = 1e-4;
  /// Stop once the trust radius falls below this.
  double step_tolerance = 1e-7;
  /// Stop once the model predicts less reduction than this.
  double objective_tolerance = 1e-12;
  int max_iterations = 300;
  bool noisy = false;
};

struct OptimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  std::string termination;  // "step", "objective" or "max_iterations"
};

using Objective = std::function<double(std::span<const double>)>;

/// Throws NumericalError when the objective returns a non-finite value.
OptimizeResult minimize(const Objective& f, std::vector<double> x0, const OptimizerOptions& opts = {});

/// Minimizer of g.s + s.B.s / 2 subject to |s| <= radius (B symmetric).
Eigen::VectorXd trust_region_step(const Eigen::VectorXd& g, const Eigen::MatrixXd& B, double radius);

}  // namespace tbvqd
