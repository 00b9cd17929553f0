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

#ifndef DSRE_MEMORY_H_
#define DSRE_MEMORY_H_

#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsre/corpus.h"
#include "dsre/embeddings.h"
#include "dsre/tape.h"
#include "dsre/tensor.h"

namespace dsre {

struct MemoryConfig {
  int hops = 4;
  int memory_capacity = 10;
  int latent_dim = 256;
};

struct MemoryParams {
  Tensor memory_proj;      // latent x latent; m_i = memory_proj . e_i
  Tensor output_proj;      // latent x latent; c_i = output_proj . e_i
  Tensor hop_transition;   // latent x latent; u_{k+1} = hop_transition . u_k + o_k
  Tensor relation_weight;  // |R| x latent
  Tensor relation_bias;    // |R|
};

MemoryParams InitMemoryParams(const MemoryConfig &config, int num_relations,
                              std::mt19937_64 &rng);

struct MemoryVars {
  Var memory_proj;
  Var output_proj;
  Var hop_transition;
  Var relation_weight;
  Var relation_bias;
};

MemoryVars BindMemory(Tape &tape, const MemoryParams &params);

struct MemoryOutput {
  Var logits;                  // 1 x |R|
  Var scores;                  // softmax(logits)
  std::vector<Var> attention;  // one 1 x B row per hop
};

// K attention passes over the bag. `heuristic` weights the memory vectors to
// form the first query and is treated as a constant.
MemoryOutput MemNetForward(const MemoryVars &vars, std::span<const Var> encodings,
                           std::span<const double> heuristic, int hops);

struct AttentionTrace {
  PairId pair;
  std::vector<std::vector<double>> hops;  // hops[k][i]
};

AttentionTrace TraceOf(const PairId &pair, const MemoryOutput &output);

// One representative sentence per non-NA relation.
struct Representative {
  std::string relation;
  std::string sentence_id;
  std::vector<std::string> tokens;
  bool empty = true;  // no training sentence shares a relation-phrase token

  friend bool operator==(const Representative &, const Representative &) = default;
};

struct RepresentativeSet {
  std::vector<Representative> entries;  // entries[r - 1] for schema index r
  friend bool operator==(const RepresentativeSet &, const RepresentativeSet &) = default;
};

// Lowercased pieces of a relation id split on '/', '_' and '.'.
std::vector<std::string> RelationPhraseTokens(std::string_view relation_id);

// Shortest training sentence containing a relation-phrase token; ties go to
// the lexicographically smaller sentence text, then sentence id.
RepresentativeSet SelectRepresentatives(const std::vector<InstanceBag> &training,
                                        const RelationSchema &schema);

// Mean static vectors of the non-empty representatives.
std::vector<std::vector<double>> RepresentativeMeans(const RepresentativeSet &reps,
                                                     const StaticEmbeddings &embeddings);

// softmax_i(max_r cosine(mean(instance_i), mean(rep_r))). Computed without a
// tape.
std::vector<double> HeuristicAttention(std::span<const Instance> instances,
                                       std::span<const std::vector<double>> rep_means,
                                       const StaticEmbeddings &embeddings);
std::vector<double> HeuristicAttention(const InstanceBag &bag, const RepresentativeSet &reps,
                                       const StaticEmbeddings &embeddings);

}  // namespace dsre

#endif  // DSRE_MEMORY_H_
