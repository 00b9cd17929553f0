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

#ifndef DSRE_TAPE_H_
#define DSRE_TAPE_H_

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "dsre/tensor.h"

namespace dsre {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid as long as the
// tape it came from.
class Var {
 public:
  Var() = default;

  bool valid() const { return tape_ != nullptr; }
  int id() const { return id_; }
  Tape *tape() const { return tape_; }
  const Tensor &value() const;
  const Shape &shape() const { return value().shape(); }

 private:
  friend class Tape;
  Var(Tape *tape, int id) : tape_(tape), id_(id) {}

  Tape *tape_ = nullptr;
  int id_ = -1;
};

// Records primitive operations in execution order and runs reverse-mode
// differentiation over them. A tape may be differentiated once; a second
// Backward() call throws. Tapes are confined to a single thread.
class Tape {
 public:
  // Receives the recorded output and its accumulated gradient.
  using BackwardFn =
      std::function<void(const Tensor &out, const Tensor &out_grad)>;

  Tape() = default;
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  // A leaf that never receives a gradient.
  Var Constant(Tensor value);
  // A leaf referring to caller-owned storage; receives a gradient. The
  // tensor must outlive the tape and must not change while it is in use.
  Var Parameter(const Tensor &value);

  // Used by primitives. `inputs` decide whether the result needs a gradient.
  Var Record(const char *op, Tensor value, std::initializer_list<Var> inputs,
             BackwardFn backward);
  Var Record(const char *op, Tensor value, std::span<const Var> inputs,
             BackwardFn backward);

  const Tensor &value(Var v) const;
  bool requires_grad(Var v) const;

  // Gradient of the loss passed to Backward(). Throws for values that do not
  // carry a gradient or before Backward() has run.
  const Tensor &grad(Var v) const;
  // Accumulation target used by backward rules.
  Tensor &mutable_grad(Var v);

  void Backward(Var loss);
  bool consumed() const { return consumed_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  const char *op_name(Var v) const;

 private:
  struct Node {
    const char *op = "";
    Tensor value;
    const Tensor *external = nullptr;
    Tensor grad;
    bool requires_grad = false;
    bool has_grad = false;
    BackwardFn backward;
  };

  const Node &node(Var v) const;
  Node &node(Var v);

  std::vector<Node> nodes_;
  bool consumed_ = false;
};

// Primitive operations. Every primitive checks its shapes and throws
// ShapeError naming the primitive and the offending shapes.

Var MatMul(Var a, Var b);
// a * transpose(b).
Var MatMulBT(Var a, Var b);
Var Transpose(Var a);
Var Reshape(Var a, Shape shape);

Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);
// Adds a length-c vector to every row of an r x c matrix.
Var AddRowBias(Var m, Var bias);
Var Scale(Var a, double s);
Var AddScalar(Var a, double s);

Var Relu(Var a);
Var Tanh(Var a);
Var Sigmoid(Var a);
Var Softmax(Var a, int axis);
// Maximum along `axis`, which is kept with extent 1. Ties go to the first
// maximal element.
Var MaxOverAxis(Var a, int axis);

Var Concat(std::span<const Var> parts, int axis);
// Rows [begin, end) of a rank-2 value.
Var SliceRows(Var a, int begin, int end);
// Rows of `table` selected by `ids`, in order.
Var GatherRows(Var table, std::span<const int> ids);

Var Sum(Var a);
Var Mean(Var a);
// Elementwise (a - b)^2.
Var SquaredError(Var a, Var b);
// -log softmax(logits)[label] for a single row of logits.
Var CrossEntropyWithLogits(Var logits, int label);

// Plain (untaped) helpers shared with non-differentiable code paths.
std::vector<double> SoftmaxValues(std::span<const double> logits);

}  // namespace dsre

#endif  // DSRE_TAPE_H_
