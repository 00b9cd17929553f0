// Copyright 2026 The dsre Authors.
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

#ifndef DSRE_GRADCHECK_H_
#define DSRE_GRADCHECK_H_

#include <cstdint>
#include <functional>
#include <string>

#include "dsre/model.h"
#include "dsre/trainer.h"

namespace dsre {

// |a - n| / max(|a|, |n|, floor).
double RelativeError(double analytic, double numeric, double floor = 1e-6);

struct GradCheckOptions {
  std::uint64_t seed = 7;
  double step = 1e-5;
  // Coordinates probed per parameter tensor; half are drawn from coordinates
  // with a nonzero analytic gradient.
  int coords_per_tensor = 24;
  double lambda_couple = 1.0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_tensor;
  std::size_t worst_index = 0;
  int coordinates_checked = 0;
  double seconds = 0.0;
};

// Compares tape gradients of the full multi-task loss with central finite
// differences on `plan`, perturbing `model` in place (restored afterwards).
GradCheckResult CheckModelGradients(Model &model, const BatchPlan &plan,
                                    const GradCheckOptions &options);

// Seeded two-bag micro-batch (3 and 2 instances, four relations) with the
// default model configuration.
GradCheckResult RunGradCheck(const GradCheckOptions &options = {});

}  // namespace dsre

#endif  // DSRE_GRADCHECK_H_
