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

#include "dsre/encoder.h"

#include <cmath>

#include "dsre/errors.h"

namespace dsre {
namespace {

Tensor UniformTable(int rows, int cols, double limit, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> dist(-limit, limit);
  Tensor t(Shape{rows, cols});
  for (double &v : t.data()) v = dist(rng);
  return t;
}

}  // namespace

EncoderParams InitEncoderParams(const EncoderConfig &config, const Vocabulary &words,
                                int num_pos_tags, const StaticEmbeddings *pretrained,
                                std::mt19937_64 &rng) {
  if (config.filter_widths.empty() || config.feature_maps_per_width < 1) {
    throw Error("encoder needs at least one filter width and one feature map");
  }
  if (pretrained != nullptr && pretrained->size() > 0 && pretrained->dim() != config.d_word) {
    throw ShapeError("pretrained vectors have dimension " + std::to_string(pretrained->dim()) +
                     " but d_word is " + std::to_string(config.d_word));
  }
  EncoderParams p;
  p.word_table = UniformTable(words.size(), config.d_word, 0.25, rng);
  if (pretrained != nullptr) {
    for (int id = 0; id < words.size(); ++id) {
      auto v = pretrained->Lookup(words.token(id));
      if (v.empty()) continue;
      for (int c = 0; c < config.d_word; ++c) p.word_table.at(id, c) = v[c];
    }
  }
  p.pos_table = UniformTable(num_pos_tags, config.d_pos_tag, 0.25, rng);
  p.position1_table = UniformTable(kPositionTableSize, config.d_position, 0.25, rng);
  p.position2_table = UniformTable(kPositionTableSize, config.d_position, 0.25, rng);
  for (int width : config.filter_widths) {
    if (width < 1) throw Error("filter width must be positive");
    const int fan_in = width * config.input_dim();
    const int fan_out = config.feature_maps_per_width;
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    ConvFilter f;
    f.width = width;
    f.weight = UniformTable(fan_out, fan_in, limit, rng);
    f.bias = Tensor(Shape{fan_out}, 0.0);
    p.filters.push_back(std::move(f));
  }
  return p;
}

EncoderVars BindEncoder(Tape &tape, const EncoderParams &params, Activation activation) {
  EncoderVars v;
  v.word_table = tape.Parameter(params.word_table);
  v.pos_table = tape.Parameter(params.pos_table);
  v.position1_table = tape.Parameter(params.position1_table);
  v.position2_table = tape.Parameter(params.position2_table);
  for (const ConvFilter &f : params.filters) {
    v.filters.push_back({f.width, tape.Parameter(f.weight), tape.Parameter(f.bias)});
  }
  v.activation = activation;
  return v;
}

Var EmbedInstance(const EncoderVars &vars, const FeatureMatrix &features) {
  if (features.length() == 0) throw Error("cannot embed an empty instance");
  std::vector<int> p1, p2;
  p1.reserve(features.length());
  p2.reserve(features.length());
  for (int off : features.pos1_offsets) p1.push_back(PositionIndex(off));
  for (int off : features.pos2_offsets) p2.push_back(PositionIndex(off));
  const Var parts[] = {
      GatherRows(vars.word_table, features.word_ids),
      GatherRows(vars.pos_table, features.pos_ids),
      GatherRows(vars.position1_table, p1),
      GatherRows(vars.position2_table, p2),
  };
  return Concat(parts, 1);
}

Var CnnEncode(const EncoderVars &vars, Var embedded) {
  const Shape &shape = embedded.shape();
  if (shape.size() != 2) {
    throw ShapeError("cnn_encode: expected an n x d matrix, got " + ShapeString(shape));
  }
  Tape &tape = *embedded.tape();
  const int n = shape[0];
  const int d = shape[1];
  std::vector<Var> pooled;
  for (const auto &filter : vars.filters) {
    const int w = filter.width;
    if (filter.weight.shape()[1] != w * d) {
      throw ShapeError("cnn_encode: filter of width " + std::to_string(w) + " has shape " +
                       ShapeString(filter.weight.shape()) + " for input " + ShapeString(shape));
    }
    Var input = embedded;
    int rows = n;
    if (n < w) {
      const Var padded[] = {embedded, tape.Constant(Tensor(Shape{w - n, d}, 0.0))};
      input = Concat(padded, 0);
      rows = w;
    }
    const int positions = rows - w + 1;
    Var windows = input;
    if (w > 1) {
      std::vector<Var> shifted;
      for (int j = 0; j < w; ++j) shifted.push_back(SliceRows(input, j, j + positions));
      windows = Concat(shifted, 1);
    }
    Var pre = AddRowBias(MatMulBT(windows, filter.weight), filter.bias);
    Var act = vars.activation == Activation::kRelu ? Relu(pre) : Tanh(pre);
    pooled.push_back(MaxOverAxis(act, 0));
  }
  return Concat(pooled, 1);
}

Var EncodeInstance(const EncoderVars &vars, const FeatureMatrix &features) {
  return CnnEncode(vars, EmbedInstance(vars, features));
}

}  // namespace dsre
