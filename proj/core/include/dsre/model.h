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

#ifndef DSRE_MODEL_H_
#define DSRE_MODEL_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dsre/corpus.h"
#include "dsre/coupling.h"
#include "dsre/embeddings.h"
#include "dsre/encoder.h"
#include "dsre/features.h"
#include "dsre/memory.h"
#include "dsre/tape.h"

namespace dsre {

struct ModelConfig {
  EncoderConfig encoder;
  MemoryConfig memory;

  // Throws when the encoder output does not feed the memory latent space.
  void Validate() const;
};

// Every learned tensor, addressable by a stable name.
struct ModelParams {
  EncoderParams encoder;
  MemoryParams memory;
  CouplingParams coupling;

  std::vector<std::pair<std::string, Tensor *>> Named();
  std::vector<std::pair<std::string, const Tensor *>> Named() const;
  bool AllFinite() const;
};

// Everything needed to score bags: configuration, vocabularies, schema,
// representatives and weights.
struct Model {
  ModelConfig config;
  RelationSchema schema;
  Vocabulary words;
  Vocabulary pos_tags;
  RepresentativeSet representatives;
  ModelParams params;
};

// Builds vocabularies and representatives from `training` and draws initial
// weights from `seed`.
Model InitModel(const ModelConfig &config, const std::vector<InstanceBag> &training,
                const RelationSchema &schema, const StaticEmbeddings &embeddings,
                std::uint64_t seed);

struct ModelVars {
  EncoderVars encoder;
  MemoryVars memory;
  CouplingVars coupling;
};

ModelVars BindModel(Tape &tape, const Model &model);

// A bag with its featurized instances and (constant) heuristic weights.
struct PreparedBag {
  const InstanceBag *bag = nullptr;
  std::vector<FeatureMatrix> features;
  std::vector<double> heuristic;
};

PreparedBag PrepareBag(const Model &model, const InstanceBag &bag,
                       const StaticEmbeddings &embeddings,
                       std::span<const std::vector<double>> rep_means);

struct BagForward {
  std::vector<Var> encodings;  // one 1 x latent row per instance
  MemoryOutput memory;
};

BagForward ForwardBag(const ModelVars &vars, const PreparedBag &bag, int hops);

}  // namespace dsre

#endif  // DSRE_MODEL_H_
