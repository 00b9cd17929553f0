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

#include "dsre/adam.h"

#include <cmath>

#include "dsre/errors.h"

namespace dsre {

Adam::Adam(AdamOptions options) : options_(options) {
  if (!(options_.learning_rate > 0.0)) throw Error("adam: learning rate must be positive");
}

void Adam::Apply(std::span<Tensor *const> params, std::span<const Tensor *const> grads) {
  if (params.size() != grads.size()) {
    throw ShapeError("adam: " + std::to_string(params.size()) + " parameters but " +
                     std::to_string(grads.size()) + " gradients");
  }
  if (first_.empty()) {
    for (const Tensor *p : params) {
      first_.emplace_back(p->shape(), 0.0);
      second_.emplace_back(p->shape(), 0.0);
    }
  }
  if (first_.size() != params.size()) {
    throw ShapeError("adam: parameter count changed between steps");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->SameShape(*grads[i]) || !params[i]->SameShape(first_[i])) {
      throw ShapeError("adam: parameter " + std::to_string(i) + " has shape " +
                       ShapeString(params[i]->shape()) + ", gradient " +
                       ShapeString(grads[i]->shape()) + ", moments " +
                       ShapeString(first_[i].shape()));
    }
  }

  ++step_count_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double t = static_cast<double>(step_count_);
  const double correction1 = 1.0 - std::pow(b1, t);
  const double correction2 = 1.0 - std::pow(b2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor &p = *params[i];
    const Tensor &g = *grads[i];
    Tensor &m = first_[i];
    Tensor &v = second_[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (g[k] == 0.0) continue;
      m[k] = b1 * m[k] + (1.0 - b1) * g[k];
      v[k] = b2 * v[k] + (1.0 - b2) * g[k] * g[k];
      const double m_hat = m[k] / correction1;
      const double v_hat = v[k] / correction2;
      p[k] -= options_.learning_rate * m_hat / (std::sqrt(v_hat) + options_.epsilon);
    }
  }
}

}  // namespace dsre
