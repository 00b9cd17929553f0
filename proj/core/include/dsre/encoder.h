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

#ifndef DSRE_ENCODER_H_
#define DSRE_ENCODER_H_

#include <random>
#include <vector>

#include "dsre/embeddings.h"
#include "dsre/features.h"
#include "dsre/tape.h"
#include "dsre/tensor.h"

namespace dsre {

enum class Activation { kRelu, kTanh };

struct EncoderConfig {
  int d_word = 300;
  int d_pos_tag = 50;
  int d_position = 50;
  std::vector<int> filter_widths = {1, 2};
  int feature_maps_per_width = 128;
  Activation activation = Activation::kRelu;

  // Columns of an embedded instance: word + tag + two position features.
  int input_dim() const { return d_word + d_pos_tag + 2 * d_position; }
  int output_dim() const {
    return feature_maps_per_width * static_cast<int>(filter_widths.size());
  }
};

struct ConvFilter {
  int width = 1;
  Tensor weight;  // feature_maps x (width * input_dim)
  Tensor bias;    // feature_maps
};

struct EncoderParams {
  Tensor word_table;       // |V| x d_word
  Tensor pos_table;        // |P| x d_pos_tag
  Tensor position1_table;  // kPositionTableSize x d_position
  Tensor position2_table;
  std::vector<ConvFilter> filters;
};

// Word rows come from `pretrained` where it covers the token; every other
// embedding row is uniform(-0.25, 0.25). Filters use Glorot-uniform weights and
// zero bias.
EncoderParams InitEncoderParams(const EncoderConfig &config, const Vocabulary &words,
                                int num_pos_tags, const StaticEmbeddings *pretrained,
                                std::mt19937_64 &rng);

struct EncoderVars {
  Var word_table;
  Var pos_table;
  Var position1_table;
  Var position2_table;
  struct Filter {
    int width;
    Var weight;
    Var bias;
  };
  std::vector<Filter> filters;
  Activation activation = Activation::kRelu;
};

EncoderVars BindEncoder(Tape &tape, const EncoderParams &params, Activation activation);

// n x input_dim matrix; row t is [word | tag | position1 | position2] of token t.
Var EmbedInstance(const EncoderVars &vars, const FeatureMatrix &features);
// Convolution per filter width, activation, max over time, concatenated into
// a 1 x output_dim row. Inputs shorter than a filter are padded with zero rows
// at the end.
Var CnnEncode(const EncoderVars &vars, Var embedded);
Var EncodeInstance(const EncoderVars &vars, const FeatureMatrix &features);

}  // namespace dsre

#endif  // DSRE_ENCODER_H_
