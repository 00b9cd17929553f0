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

#ifndef DSRE_ADAM_H_
#define DSRE_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dsre/tensor.h"

namespace dsre {

struct AdamOptions {
  double learning_rate = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam. Coordinates whose gradient is exactly zero are left
// alone (value and both moments), so parameters off the loss path never move.
class Adam {
 public:
  explicit Adam(AdamOptions options = {});

  // Updates params[i] in place from grads[i]. Moment buffers are sized on the
  // first call and must keep matching shapes afterwards.
  void Apply(std::span<Tensor *const> params, std::span<const Tensor *const> grads);

  const AdamOptions &options() const { return options_; }
  std::int64_t step_count() const { return step_count_; }
  const std::vector<Tensor> &first_moment() const { return first_; }
  const std::vector<Tensor> &second_moment() const { return second_; }

 private:
  AdamOptions options_;
  std::int64_t step_count_ = 0;
  std::vector<Tensor> first_;
  std::vector<Tensor> second_;
};

}  // namespace dsre

#endif  // DSRE_ADAM_H_
