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

#include "dsre/model.h"

#include <random>

#include "dsre/errors.h"

namespace dsre {

void ModelConfig::Validate() const {
  if (encoder.output_dim() != memory.latent_dim) {
    throw Error("encoder output dimension " + std::to_string(encoder.output_dim()) +
                " must equal memory latent dimension " + std::to_string(memory.latent_dim));
  }
  if (memory.hops < 1) throw Error("hops must be at least 1");
  if (memory.memory_capacity < 1) throw Error("memory capacity must be at least 1");
}

std::vector<std::pair<std::string, Tensor *>> ModelParams::Named() {
  std::vector<std::pair<std::string, Tensor *>> out = {
      {"encoder.word_table", &encoder.word_table},
      {"encoder.pos_table", &encoder.pos_table},
      {"encoder.position1_table", &encoder.position1_table},
      {"encoder.position2_table", &encoder.position2_table},
  };
  for (ConvFilter &f : encoder.filters) {
    const std::string prefix = "encoder.conv" + std::to_string(f.width);
    out.emplace_back(prefix + ".weight", &f.weight);
    out.emplace_back(prefix + ".bias", &f.bias);
  }
  out.emplace_back("memory.memory_proj", &memory.memory_proj);
  out.emplace_back("memory.output_proj", &memory.output_proj);
  out.emplace_back("memory.hop_transition", &memory.hop_transition);
  out.emplace_back("memory.relation_weight", &memory.relation_weight);
  out.emplace_back("memory.relation_bias", &memory.relation_bias);
  out.emplace_back("coupling.weight", &coupling.weight);
  out.emplace_back("coupling.bias", &coupling.bias);
  return out;
}

std::vector<std::pair<std::string, const Tensor *>> ModelParams::Named() const {
  std::vector<std::pair<std::string, const Tensor *>> out;
  for (auto &[name, t] : const_cast<ModelParams *>(this)->Named()) out.emplace_back(name, t);
  return out;
}

bool ModelParams::AllFinite() const {
  for (const auto &[_, t] : Named()) {
    if (!t->AllFinite()) return false;
  }
  return true;
}

Model InitModel(const ModelConfig &config, const std::vector<InstanceBag> &training,
                const RelationSchema &schema, const StaticEmbeddings &embeddings,
                std::uint64_t seed) {
  config.Validate();
  Model model;
  model.config = config;
  model.schema = schema;
  model.words = Vocabulary::Words(training);
  model.pos_tags = Vocabulary::PosTags(training);
  model.representatives = SelectRepresentatives(training, schema);

  std::mt19937_64 rng(seed);
  model.params.encoder = InitEncoderParams(config.encoder, model.words, model.pos_tags.size(),
                                           &embeddings, rng);
  model.params.memory = InitMemoryParams(config.memory, schema.size(), rng);
  model.params.coupling = InitCouplingParams(config.memory.latent_dim, rng);
  return model;
}

ModelVars BindModel(Tape &tape, const Model &model) {
  return ModelVars{BindEncoder(tape, model.params.encoder, model.config.encoder.activation),
                   BindMemory(tape, model.params.memory),
                   BindCoupling(tape, model.params.coupling)};
}

PreparedBag PrepareBag(const Model &model, const InstanceBag &bag,
                       const StaticEmbeddings &embeddings,
                       std::span<const std::vector<double>> rep_means) {
  if (bag.instances.empty()) throw Error("bag " + bag.pair.ToString() + " has no instances");
  if (static_cast<int>(bag.instances.size()) > model.config.memory.memory_capacity) {
    throw Error("bag " + bag.pair.ToString() + " exceeds memory capacity");
  }
  PreparedBag p;
  p.bag = &bag;
  for (const Instance &inst : bag.instances) {
    p.features.push_back(Featurize(inst, model.words, model.pos_tags));
  }
  p.heuristic = HeuristicAttention(bag.instances, rep_means, embeddings);
  return p;
}

BagForward ForwardBag(const ModelVars &vars, const PreparedBag &bag, int hops) {
  BagForward out;
  for (const FeatureMatrix &fm : bag.features) {
    out.encodings.push_back(EncodeInstance(vars.encoder, fm));
  }
  out.memory = MemNetForward(vars.memory, out.encodings, bag.heuristic, hops);
  return out;
}

}  // namespace dsre
