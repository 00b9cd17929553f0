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

#include "dsre/tape.h"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "dsre/errors.h"

namespace dsre {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;

ConstMatrixMap AsMatrix(const Tensor &t) {
  return ConstMatrixMap(t.raw(), t.rows(), t.cols());
}
MatrixMap AsMatrix(Tensor &t) { return MatrixMap(t.raw(), t.rows(), t.cols()); }

[[noreturn]] void Mismatch(const char *op, const Shape &a, const Shape &b) {
  throw ShapeError(std::string(op) + ": shapes " + ShapeString(a) + " and " +
                   ShapeString(b) + " do not conform");
}

void RequireMatrix(const char *op, const Tensor &t) {
  if (t.rank() != 2) {
    throw ShapeError(std::string(op) + ": expected a matrix, got shape " +
                     ShapeString(t.shape()));
  }
}

Tape &TapeOf(const char *op, Var a) {
  if (!a.valid()) throw Error(std::string(op) + ": invalid variable");
  return *a.tape();
}

Tape &TapeOf(const char *op, Var a, Var b) {
  Tape &t = TapeOf(op, a);
  if (b.tape() != &t) throw Error(std::string(op) + ": operands on different tapes");
  return t;
}

// Decomposition of a shape around one axis: outer x len x inner.
struct AxisLayout {
  std::size_t outer = 1;
  std::size_t len = 1;
  std::size_t inner = 1;
};

AxisLayout LayoutAround(const char *op, const Shape &shape, int axis) {
  if (axis < 0 || axis >= static_cast<int>(shape.size())) {
    throw ShapeError(std::string(op) + ": axis " + std::to_string(axis) +
                     " out of range for shape " + ShapeString(shape));
  }
  AxisLayout l;
  for (int i = 0; i < axis; ++i) l.outer *= shape[i];
  l.len = shape[axis];
  for (std::size_t i = axis + 1; i < shape.size(); ++i) l.inner *= shape[i];
  return l;
}

}  // namespace

// ---------------------------------------------------------------------------
// Var / Tape

const Tensor &Var::value() const {
  if (tape_ == nullptr) throw Error("value() on invalid variable");
  return tape_->value(*this);
}

const Tape::Node &Tape::node(Var v) const {
  if (v.tape() != this || v.id() < 0 || v.id() >= static_cast<int>(nodes_.size())) {
    throw Error("variable does not belong to this tape");
  }
  return nodes_[v.id()];
}

Tape::Node &Tape::node(Var v) {
  return const_cast<Node &>(static_cast<const Tape *>(this)->node(v));
}

Var Tape::Constant(Tensor value) {
  Node n;
  n.op = "constant";
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Parameter(const Tensor &value) {
  Node n;
  n.op = "parameter";
  n.external = &value;
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Record(const char *op, Tensor value, std::initializer_list<Var> inputs,
                 BackwardFn backward) {
  return Record(op, std::move(value), std::span<const Var>(inputs.begin(), inputs.size()),
                std::move(backward));
}

Var Tape::Record(const char *op, Tensor value, std::span<const Var> inputs,
                 BackwardFn backward) {
  if (consumed_) throw Error(std::string(op) + ": tape already differentiated");
  bool needs = false;
  for (Var in : inputs) needs = needs || requires_grad(in);
  Node n;
  n.op = op;
  n.value = std::move(value);
  n.requires_grad = needs;
  if (needs) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

const Tensor &Tape::value(Var v) const {
  const Node &n = node(v);
  return n.external != nullptr ? *n.external : n.value;
}

bool Tape::requires_grad(Var v) const { return node(v).requires_grad; }

const char *Tape::op_name(Var v) const { return node(v).op; }

const Tensor &Tape::grad(Var v) const {
  const Node &n = node(v);
  if (!n.requires_grad) throw Error("grad(): value does not carry a gradient");
  if (!n.has_grad) throw Error("grad(): Backward() has not reached this value");
  return n.grad;
}

Tensor &Tape::mutable_grad(Var v) {
  Node &n = node(v);
  if (!n.has_grad) throw Error("mutable_grad(): no gradient buffer");
  return n.grad;
}

void Tape::Backward(Var loss) {
  if (consumed_) throw Error("Backward(): tape already differentiated");
  Node &root = node(loss);
  if (value(loss).size() != 1) {
    throw ShapeError("Backward(): loss must be scalar, got shape " +
                     ShapeString(value(loss).shape()));
  }
  consumed_ = true;
  for (int i = 0; i <= loss.id(); ++i) {
    Node &n = nodes_[i];
    if (!n.requires_grad) continue;
    n.grad = Tensor(value(Var(this, i)).shape(), 0.0);
    n.has_grad = true;
  }
  if (!root.requires_grad) return;
  root.grad[0] = 1.0;
  for (int i = loss.id(); i >= 0; --i) {
    Node &n = nodes_[i];
    if (n.requires_grad && n.backward) n.backward(value(Var(this, i)), n.grad);
  }
}

// ---------------------------------------------------------------------------
// Linear algebra

Var MatMul(Var a, Var b) {
  Tape &t = TapeOf("matmul", a, b);
  const Tensor &x = a.value();
  const Tensor &y = b.value();
  RequireMatrix("matmul", x);
  RequireMatrix("matmul", y);
  if (x.cols() != y.rows()) Mismatch("matmul", x.shape(), y.shape());
  Tensor out(Shape{x.rows(), y.cols()});
  AsMatrix(out).noalias() = AsMatrix(x) * AsMatrix(y);
  return t.Record("matmul", std::move(out), {a, b}, [a, b](const Tensor &, const Tensor &g) {
    Tape &t = *a.tape();
    if (t.requires_grad(a)) {
      AsMatrix(t.mutable_grad(a)).noalias() +=
          AsMatrix(g) * AsMatrix(b.value()).transpose();
    }
    if (t.requires_grad(b)) {
      AsMatrix(t.mutable_grad(b)).noalias() +=
          AsMatrix(a.value()).transpose() * AsMatrix(g);
    }
  });
}

Var MatMulBT(Var a, Var b) {
  Tape &t = TapeOf("matmul_bt", a, b);
  const Tensor &x = a.value();
  const Tensor &y = b.value();
  RequireMatrix("matmul_bt", x);
  RequireMatrix("matmul_bt", y);
  if (x.cols() != y.cols()) Mismatch("matmul_bt", x.shape(), y.shape());
  Tensor out(Shape{x.rows(), y.rows()});
  AsMatrix(out).noalias() = AsMatrix(x) * AsMatrix(y).transpose();
  return t.Record("matmul_bt", std::move(out), {a, b}, [a, b](const Tensor &, const Tensor &g) {
    Tape &t = *a.tape();
    if (t.requires_grad(a)) {
      AsMatrix(t.mutable_grad(a)).noalias() += AsMatrix(g) * AsMatrix(b.value());
    }
    if (t.requires_grad(b)) {
      AsMatrix(t.mutable_grad(b)).noalias() +=
          AsMatrix(g).transpose() * AsMatrix(a.value());
    }
  });
}

Var Transpose(Var a) {
  Tape &t = TapeOf("transpose", a);
  const Tensor &x = a.value();
  RequireMatrix("transpose", x);
  Tensor out(Shape{x.cols(), x.rows()});
  AsMatrix(out) = AsMatrix(x).transpose();
  return t.Record("transpose", std::move(out), {a}, [a](const Tensor &, const Tensor &g) {
    AsMatrix(a.tape()->mutable_grad(a)) += AsMatrix(g).transpose();
  });
}

Var Reshape(Var a, Shape shape) {
  Tape &t = TapeOf("reshape", a);
  const Tensor &x = a.value();
  if (NumElements(shape) != x.size()) Mismatch("reshape", x.shape(), shape);
  Tensor out(std::move(shape), std::vector<double>(x.data().begin(), x.data().end()));
  return t.Record("reshape", std::move(out), {a}, [a](const Tensor &, const Tensor &g) {
    Tensor &ga = a.tape()->mutable_grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
  });
}

// ---------------------------------------------------------------------------
// Elementwise

Var Add(Var a, Var b) {
  Tape &t = TapeOf("add", a, b);
  const Tensor &x = a.value();
  const Tensor &y = b.value();
  if (!x.SameShape(y)) Mismatch("add", x.shape(), y.shape());
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return t.Record("add", std::move(out), {a, b}, [a, b](const Tensor &, const Tensor &g) {
    Tape &t = *a.tape();
    for (Var v : {a, b}) {
      if (!t.requires_grad(v)) continue;
      Tensor &gv = t.mutable_grad(v);
      for (std::size_t i = 0; i < g.size(); ++i) gv[i] += g[i];
    }
  });
}

Var Sub(Var a, Var b) {
  Tape &t = TapeOf("sub", a, b);
  const Tensor &x = a.value();
  const Tensor &y = b.value();
  if (!x.SameShape(y)) Mismatch("sub", x.shape(), y.shape());
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return t.Record("sub", std::move(out), {a, b}, [a, b](const Tensor &, const Tensor &g) {
    Tape &t = *a.tape();
    if (t.requires_grad(a)) {
      Tensor &ga = t.mutable_grad(a);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    }
    if (t.requires_grad(b)) {
      Tensor &gb = t.mutable_grad(b);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
    }
  });
}

Var Mul(Var a, Var b) {
  Tape &t = TapeOf("mul", a, b);
  const Tensor &x = a.value();
  const Tensor &y = b.value();
  if (!x.SameShape(y)) Mismatch("mul", x.shape(), y.shape());
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return t.Record("mul", std::move(out), {a, b}, [a, b](const Tensor &, const Tensor &g) {
    Tape &t = *a.tape();
    const Tensor &x = a.value();
    const Tensor &y = b.value();
    if (t.requires_grad(a)) {
      Tensor &ga = t.mutable_grad(a);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i];
    }
    if (t.requires_grad(b)) {
      Tensor &gb = t.mutable_grad(b);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * x[i];
    }
  });
}

Var AddRowBias(Var m, Var bias) {
  Tape &t = TapeOf("add_row_bias", m, bias);
  const Tensor &x = m.value();
  const Tensor &b = bias.value();
  RequireMatrix("add_row_bias", x);
  if (b.size() != static_cast<std::size_t>(x.cols()) || b.rows() != 1) {
    Mismatch("add_row_bias", x.shape(), b.shape());
  }
  Tensor out = x;
  for (int r = 0; r < x.rows(); ++r) {
    for (int c = 0; c < x.cols(); ++c) out.at(r, c) += b[c];
  }
  return t.Record("add_row_bias", std::move(out), {m, bias}, [m, bias](const Tensor &, const Tensor &g) {
    Tape &t = *m.tape();
    if (t.requires_grad(m)) {
      Tensor &gm = t.mutable_grad(m);
      for (std::size_t i = 0; i < g.size(); ++i) gm[i] += g[i];
    }
    if (t.requires_grad(bias)) {
      Tensor &gb = t.mutable_grad(bias);
      for (int r = 0; r < g.rows(); ++r) {
        for (int c = 0; c < g.cols(); ++c) gb[c] += g.at(r, c);
      }
    }
  });
}

Var Scale(Var a, double s) {
  Tape &t = TapeOf("scale", a);
  Tensor out = a.value();
  for (double &v : out.data()) v *= s;
  return t.Record("scale", std::move(out), {a}, [a, s](const Tensor &, const Tensor &g) {
    Tensor &ga = a.tape()->mutable_grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += s * g[i];
  });
}

Var AddScalar(Var a, double s) {
  Tape &t = TapeOf("add_scalar", a);
  Tensor out = a.value();
  for (double &v : out.data()) v += s;
  return t.Record("add_scalar", std::move(out), {a}, [a](const Tensor &, const Tensor &g) {
    Tensor &ga = a.tape()->mutable_grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
  });
}

Var Relu(Var a) {
  Tape &t = TapeOf("relu", a);
  Tensor out = a.value();
  for (double &v : out.data()) v = v > 0.0 ? v : 0.0;
  return t.Record("relu", std::move(out), {a}, [a](const Tensor &, const Tensor &g) {
    const Tensor &x = a.value();
    Tensor &ga = a.tape()->mutable_grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (x[i] > 0.0) ga[i] += g[i];
    }
  });
}

Var Tanh(Var a) {
  Tape &t = TapeOf("tanh", a);
  Tensor out = a.value();
  for (double &v : out.data()) v = std::tanh(v);
  return t.Record("tanh", std::move(out), {a}, [a](const Tensor &y, const Tensor &g) {
    Tensor &ga = a.tape()->mutable_grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Var Sigmoid(Var a) {
  Tape &t = TapeOf("sigmoid", a);
  Tensor out = a.value();
  for (double &v : out.data()) v = 1.0 / (1.0 + std::exp(-v));
  return t.Record("sigmoid", std::move(out), {a}, [a](const Tensor &y, const Tensor &g) {
    Tensor &ga = a.tape()->mutable_grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

// ---------------------------------------------------------------------------
// Axis-wise operations

std::vector<double> SoftmaxValues(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double mx = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double &v : out) {
    v = std::exp(v - mx);
    total += v;
  }
  for (double &v : out) v /= total;
  return out;
}

Var Softmax(Var a, int axis) {
  Tape &t = TapeOf("softmax", a);
  const Tensor &x = a.value();
  const AxisLayout l = LayoutAround("softmax", x.shape(), axis);
  Tensor out(x.shape());
  for (std::size_t o = 0; o < l.outer; ++o) {
    for (std::size_t in = 0; in < l.inner; ++in) {
      const std::size_t base = o * l.len * l.inner + in;
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < l.len; ++k) mx = std::max(mx, x[base + k * l.inner]);
      double total = 0.0;
      for (std::size_t k = 0; k < l.len; ++k) {
        const double e = std::exp(x[base + k * l.inner] - mx);
        out[base + k * l.inner] = e;
        total += e;
      }
      for (std::size_t k = 0; k < l.len; ++k) out[base + k * l.inner] /= total;
    }
  }
  return t.Record("softmax", std::move(out), {a}, [a, l](const Tensor &y, const Tensor &g) {
    Tensor &ga = a.tape()->mutable_grad(a);
    for (std::size_t o = 0; o < l.outer; ++o) {
      for (std::size_t in = 0; in < l.inner; ++in) {
        const std::size_t base = o * l.len * l.inner + in;
        double dot = 0.0;
        for (std::size_t k = 0; k < l.len; ++k) {
          dot += g[base + k * l.inner] * y[base + k * l.inner];
        }
        for (std::size_t k = 0; k < l.len; ++k) {
          const std::size_t i = base + k * l.inner;
          ga[i] += y[i] * (g[i] - dot);
        }
      }
    }
  });
}

Var MaxOverAxis(Var a, int axis) {
  Tape &t = TapeOf("max_over_axis", a);
  const Tensor &x = a.value();
  const AxisLayout l = LayoutAround("max_over_axis", x.shape(), axis);
  Shape out_shape = x.shape();
  out_shape[axis] = 1;
  Tensor out(out_shape);
  std::vector<std::size_t> argmax(l.outer * l.inner);
  for (std::size_t o = 0; o < l.outer; ++o) {
    for (std::size_t in = 0; in < l.inner; ++in) {
      const std::size_t base = o * l.len * l.inner + in;
      std::size_t best = base;
      for (std::size_t k = 1; k < l.len; ++k) {
        if (x[base + k * l.inner] > x[best]) best = base + k * l.inner;
      }
      out[o * l.inner + in] = x[best];
      argmax[o * l.inner + in] = best;
    }
  }
  return t.Record("max_over_axis", std::move(out), {a},
                  [a, argmax = std::move(argmax)](const Tensor &, const Tensor &g) {
                    Tensor &ga = a.tape()->mutable_grad(a);
                    for (std::size_t i = 0; i < argmax.size(); ++i) ga[argmax[i]] += g[i];
                  });
}

Var Concat(std::span<const Var> parts, int axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  Tape &t = TapeOf("concat", parts[0]);
  const Shape &first = parts[0].value().shape();
  LayoutAround("concat", first, axis);
  Shape out_shape = first;
  out_shape[axis] = 0;
  for (Var p : parts) {
    if (p.tape() != &t) throw Error("concat: operands on different tapes");
    const Shape &s = p.value().shape();
    if (s.size() != first.size()) Mismatch("concat", first, s);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (static_cast<int>(i) != axis && s[i] != first[i]) Mismatch("concat", first, s);
    }
    out_shape[axis] += s[axis];
  }
  const AxisLayout lo = LayoutAround("concat", out_shape, axis);
  Tensor out(out_shape);
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (Var p : parts) {
    const Tensor &x = p.value();
    const std::size_t chunk = static_cast<std::size_t>(x.shape()[axis]) * lo.inner;
    for (std::size_t o = 0; o < lo.outer; ++o) {
      std::copy_n(x.raw() + o * chunk, chunk, out.raw() + o * lo.len * lo.inner + offset);
    }
    offsets.push_back(offset);
    offset += chunk;
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return t.Record("concat", std::move(out), parts,
                  [inputs, offsets, lo, axis](const Tensor &, const Tensor &g) {
                    Tape &t = *inputs[0].tape();
                    for (std::size_t p = 0; p < inputs.size(); ++p) {
                      if (!t.requires_grad(inputs[p])) continue;
                      Tensor &gp = t.mutable_grad(inputs[p]);
                      const std::size_t chunk =
                          static_cast<std::size_t>(gp.shape()[axis]) * lo.inner;
                      for (std::size_t o = 0; o < lo.outer; ++o) {
                        const double *src = g.raw() + o * lo.len * lo.inner + offsets[p];
                        double *dst = gp.raw() + o * chunk;
                        for (std::size_t i = 0; i < chunk; ++i) dst[i] += src[i];
                      }
                    }
                  });
}

Var SliceRows(Var a, int begin, int end) {
  Tape &t = TapeOf("slice_rows", a);
  const Tensor &x = a.value();
  RequireMatrix("slice_rows", x);
  if (begin < 0 || end > x.rows() || begin >= end) {
    throw ShapeError("slice_rows: rows [" + std::to_string(begin) + "," +
                     std::to_string(end) + ") invalid for shape " + ShapeString(x.shape()));
  }
  const std::size_t cols = x.cols();
  Tensor out(Shape{end - begin, x.cols()});
  std::copy_n(x.raw() + begin * cols, out.size(), out.raw());
  return t.Record("slice_rows", std::move(out), {a},
                  [a, begin, cols](const Tensor &, const Tensor &g) {
                    Tensor &ga = a.tape()->mutable_grad(a);
                    double *dst = ga.raw() + begin * cols;
                    for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
                  });
}

Var GatherRows(Var table, std::span<const int> ids) {
  Tape &t = TapeOf("gather_rows", table);
  const Tensor &x = table.value();
  RequireMatrix("gather_rows", x);
  if (ids.empty()) throw ShapeError("gather_rows: empty index list");
  const std::size_t cols = x.cols();
  Tensor out(Shape{static_cast<int>(ids.size()), x.cols()});
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] < 0 || ids[r] >= x.rows()) {
      throw ShapeError("gather_rows: index " + std::to_string(ids[r]) +
                       " out of range for table of shape " + ShapeString(x.shape()));
    }
    std::copy_n(x.raw() + ids[r] * cols, cols, out.raw() + r * cols);
  }
  std::vector<int> rows(ids.begin(), ids.end());
  return t.Record("gather_rows", std::move(out), {table},
                  [table, rows = std::move(rows), cols](const Tensor &, const Tensor &g) {
                    Tensor &gt = table.tape()->mutable_grad(table);
                    for (std::size_t r = 0; r < rows.size(); ++r) {
                      double *dst = gt.raw() + rows[r] * cols;
                      const double *src = g.raw() + r * cols;
                      for (std::size_t c = 0; c < cols; ++c) dst[c] += src[c];
                    }
                  });
}

// ---------------------------------------------------------------------------
// Reductions and losses

Var Sum(Var a) {
  Tape &t = TapeOf("sum", a);
  double total = 0.0;
  for (double v : a.value().data()) total += v;
  return t.Record("sum", Tensor::Scalar(total), {a}, [a](const Tensor &, const Tensor &g) {
    Tensor &ga = a.tape()->mutable_grad(a);
    for (double &v : ga.data()) v += g[0];
  });
}

Var Mean(Var a) {
  Tape &t = TapeOf("mean", a);
  double total = 0.0;
  for (double v : a.value().data()) total += v;
  const double n = static_cast<double>(a.value().size());
  return t.Record("mean", Tensor::Scalar(total / n), {a},
                  [a, n](const Tensor &, const Tensor &g) {
                    Tensor &ga = a.tape()->mutable_grad(a);
                    for (double &v : ga.data()) v += g[0] / n;
                  });
}

Var SquaredError(Var a, Var b) {
  Tape &t = TapeOf("squared_error", a, b);
  const Tensor &x = a.value();
  const Tensor &y = b.value();
  if (!x.SameShape(y)) Mismatch("squared_error", x.shape(), y.shape());
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - y[i]) * (x[i] - y[i]);
  return t.Record("squared_error", std::move(out), {a, b},
                  [a, b](const Tensor &, const Tensor &g) {
                    Tape &t = *a.tape();
                    const Tensor &x = a.value();
                    const Tensor &y = b.value();
                    if (t.requires_grad(a)) {
                      Tensor &ga = t.mutable_grad(a);
                      for (std::size_t i = 0; i < g.size(); ++i) {
                        ga[i] += 2.0 * g[i] * (x[i] - y[i]);
                      }
                    }
                    if (t.requires_grad(b)) {
                      Tensor &gb = t.mutable_grad(b);
                      for (std::size_t i = 0; i < g.size(); ++i) {
                        gb[i] -= 2.0 * g[i] * (x[i] - y[i]);
                      }
                    }
                  });
}

Var CrossEntropyWithLogits(Var logits, int label) {
  Tape &t = TapeOf("cross_entropy", logits);
  const Tensor &z = logits.value();
  if (z.rows() != 1 || z.rank() > 2) {
    throw ShapeError("cross_entropy: expected a single row of logits, got shape " +
                     ShapeString(z.shape()));
  }
  if (label < 0 || label >= static_cast<int>(z.size())) {
    throw ShapeError("cross_entropy: label " + std::to_string(label) +
                     " out of range for shape " + ShapeString(z.shape()));
  }
  const double mx = *std::max_element(z.data().begin(), z.data().end());
  double total = 0.0;
  for (double v : z.data()) total += std::exp(v - mx);
  const double loss = mx + std::log(total) - z[label];
  return t.Record("cross_entropy", Tensor::Scalar(loss), {logits},
                  [logits, label](const Tensor &, const Tensor &g) {
                    std::vector<double> p = SoftmaxValues(logits.value().data());
                    p[label] -= 1.0;
                    Tensor &gz = logits.tape()->mutable_grad(logits);
                    for (std::size_t i = 0; i < p.size(); ++i) gz[i] += g[0] * p[i];
                  });
}

}  // namespace dsre
