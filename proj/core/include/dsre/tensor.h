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

#ifndef DSRE_TENSOR_H_
#define DSRE_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace dsre {

using Shape = std::vector<int>;

std::string ShapeString(const Shape &shape);
std::size_t NumElements(const Shape &shape);

// Dense row-major array of doubles. Every dimension is at least 1; a scalar
// has shape {1}.
class Tensor {
 public:
  Tensor() : Tensor(Shape{1}) {}
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor Scalar(double value) { return Tensor(Shape{1}, {value}); }
  // A 1 x n matrix.
  static Tensor Row(std::vector<double> values);
  static Tensor Matrix(int rows, int cols, std::vector<double> values);

  const Shape &shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }

  // Matrix view: rank-1 tensors are treated as a single row.
  int rows() const { return rank() == 1 ? 1 : shape_[0]; }
  int cols() const { return rank() == 1 ? shape_[0] : shape_[1]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  double *raw() { return data_.data(); }
  const double *raw() const { return data_.data(); }

  double &operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double &at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols() + c]; }
  double at(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols() + c];
  }
  double item() const;

  void Fill(double value);
  bool AllFinite() const;
  bool SameShape(const Tensor &other) const { return shape_ == other.shape_; }

  friend bool operator==(const Tensor &a, const Tensor &b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_;
  std::vector<double> data_;
};

}  // namespace dsre

#endif  // DSRE_TENSOR_H_
