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

#include "dsre/tensor.h"

#include <cmath>
#include <sstream>
#include <utility>

#include "dsre/errors.h"

namespace dsre {

std::string ShapeString(const Shape &shape) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out << ",";
    out << shape[i];
  }
  out << ")";
  return out.str();
}

std::size_t NumElements(const Shape &shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 1) throw ShapeError("invalid dimension in shape " + ShapeString(shape));
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), data_(NumElements(shape_), fill) {
  if (shape_.empty()) throw ShapeError("tensor shape must have rank >= 1");
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.empty()) throw ShapeError("tensor shape must have rank >= 1");
  if (NumElements(shape_) != data_.size()) {
    throw ShapeError("shape " + ShapeString(shape_) + " does not hold " +
                     std::to_string(data_.size()) + " values");
  }
}

Tensor Tensor::Row(std::vector<double> values) {
  const int n = static_cast<int>(values.size());
  return Tensor(Shape{1, n}, std::move(values));
}

Tensor Tensor::Matrix(int rows, int cols, std::vector<double> values) {
  return Tensor(Shape{rows, cols}, std::move(values));
}

double Tensor::item() const {
  if (data_.size() != 1) {
    throw ShapeError("item() on non-scalar tensor of shape " + ShapeString(shape_));
  }
  return data_[0];
}

void Tensor::Fill(double value) {
  for (double &v : data_) v = value;
}

bool Tensor::AllFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace dsre
