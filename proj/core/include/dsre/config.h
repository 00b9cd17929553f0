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

#ifndef DSRE_CONFIG_H_
#define DSRE_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "dsre/model.h"

namespace dsre {

struct TrainConfig {
  double learning_rate = 2e-4;
  int epochs = 10;
  int batch_bags = 8;
  double lambda_couple = 1.0;  // 0 disables the coupling loss
  int m_max = kDefaultMaxCouplingPairs;
  std::uint64_t seed = 1;
  int checkpoint_every = 1;  // epochs; 0 writes only the initial and final checkpoints
  int max_sentence_len = 100;

  std::string corpus;
  std::string schema;
  std::string embeddings;
  std::string output_dir;
  std::string dev_corpus;
  std::string dev_gold;

  ModelConfig model;

  void Validate() const;
};

// Flat "key = value" text; '#' starts a comment. Unknown keys and bad values
// raise ParseError with the line number.
TrainConfig ParseTrainConfig(std::string_view text, const std::string &source);
TrainConfig LoadTrainConfig(const std::string &path);
// Applies one assignment; used by the parser and for command-line overrides.
void SetConfigValue(TrainConfig &config, std::string_view key, std::string_view value);
std::string SerializeTrainConfig(const TrainConfig &config);

}  // namespace dsre

#endif  // DSRE_CONFIG_H_
