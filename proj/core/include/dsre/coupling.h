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

#ifndef DSRE_COUPLING_H_
#define DSRE_COUPLING_H_

#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dsre/corpus.h"
#include "dsre/embeddings.h"
#include "dsre/tape.h"
#include "dsre/tensor.h"

namespace dsre {

// Output row 0 predicts verb-phrase similarity, row 1 entity-pair similarity.
struct CouplingParams {
  Tensor weight;  // 2 x (2 * latent)
  Tensor bias;    // 2
};

CouplingParams InitCouplingParams(int latent_dim, std::mt19937_64 &rng);

struct CouplingVars {
  Var weight;
  Var bias;
};

CouplingVars BindCoupling(Tape &tape, const CouplingParams &params);

// Elementwise product and difference of two instance representations.
Var SymmetricFeatures(Var h1, Var h2);
Var AsymmetricFeatures(Var h1, Var h2);

// sigmoid(W [h1*h2 : h1-h2] + b), a 1 x 2 row.
Var CouplingForward(const CouplingVars &vars, Var h1, Var h2);

// Maximum pairwise cosine between the static vectors of the two phrases,
// clamped to [0, 1]. Unknown tokens are skipped; nullopt when either side has
// no known token.
std::optional<double> SimilarityTarget(std::span<const std::string> phrase_a,
                                       std::span<const std::string> phrase_b,
                                       const StaticEmbeddings &embeddings);

struct CouplingPair {
  int instance_a = 0;  // index into the first bag
  int instance_b = 0;  // index into the second bag
  std::optional<double> target_verb;
  std::optional<double> target_entity;
};

inline constexpr int kDefaultMaxCouplingPairs = 25;

// Cross product of the two bags' instances, subsampled without replacement to
// at most `max_pairs`. Bags must belong to different entity pairs.
std::vector<CouplingPair> SampleCouplingPairs(const InstanceBag &bag_a,
                                              const InstanceBag &bag_b, int max_pairs,
                                              std::mt19937_64 &rng,
                                              const StaticEmbeddings &embeddings);

// Squared error between `g` and the defined targets, averaged over them.
// Invalid Var when neither target is defined.
Var CouplingPairLoss(Var g, const CouplingPair &pair);

}  // namespace dsre

#endif  // DSRE_COUPLING_H_
