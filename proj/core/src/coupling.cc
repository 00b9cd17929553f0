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

#include "dsre/coupling.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dsre/errors.h"

namespace dsre {

CouplingParams InitCouplingParams(int latent_dim, std::mt19937_64 &rng) {
  const int in = 2 * latent_dim;
  const double limit = std::sqrt(6.0 / (in + 2));
  std::uniform_real_distribution<double> dist(-limit, limit);
  CouplingParams p{Tensor(Shape{2, in}), Tensor(Shape{2}, 0.0)};
  for (double &v : p.weight.data()) v = dist(rng);
  return p;
}

CouplingVars BindCoupling(Tape &tape, const CouplingParams &params) {
  return CouplingVars{tape.Parameter(params.weight), tape.Parameter(params.bias)};
}

Var SymmetricFeatures(Var h1, Var h2) { return Mul(h1, h2); }

Var AsymmetricFeatures(Var h1, Var h2) { return Sub(h1, h2); }

Var CouplingForward(const CouplingVars &vars, Var h1, Var h2) {
  if (h1.shape() != h2.shape()) {
    throw ShapeError("coupling_forward: shapes " + ShapeString(h1.shape()) + " and " +
                     ShapeString(h2.shape()) + " do not conform");
  }
  const Var features[] = {SymmetricFeatures(h1, h2), AsymmetricFeatures(h1, h2)};
  Var joined = Concat(features, h1.shape().size() - 1);
  if (joined.value().rank() == 1) joined = Reshape(joined, Shape{1, joined.shape()[0]});
  return Sigmoid(AddRowBias(MatMulBT(joined, vars.weight), vars.bias));
}

std::optional<double> SimilarityTarget(std::span<const std::string> phrase_a,
                                       std::span<const std::string> phrase_b,
                                       const StaticEmbeddings &embeddings) {
  std::optional<double> best;
  for (const auto &a : phrase_a) {
    const auto va = embeddings.Lookup(a);
    if (va.empty()) continue;
    for (const auto &b : phrase_b) {
      const auto vb = embeddings.Lookup(b);
      if (vb.empty()) continue;
      const double s = Cosine(va, vb);
      if (!best || s > *best) best = s;
    }
  }
  if (!best) return std::nullopt;
  return std::clamp(*best, 0.0, 1.0);
}

std::vector<CouplingPair> SampleCouplingPairs(const InstanceBag &bag_a,
                                              const InstanceBag &bag_b, int max_pairs,
                                              std::mt19937_64 &rng,
                                              const StaticEmbeddings &embeddings) {
  if (bag_a.pair == bag_b.pair) {
    throw Error("coupling pairs need two different entity pairs, got " +
                bag_a.pair.ToString() + " twice");
  }
  const int na = static_cast<int>(bag_a.instances.size());
  const int nb = static_cast<int>(bag_b.instances.size());
  std::vector<int> cells(static_cast<std::size_t>(na) * nb);
  std::iota(cells.begin(), cells.end(), 0);
  const int keep = std::min<int>(max_pairs, static_cast<int>(cells.size()));
  if (keep < static_cast<int>(cells.size())) {
    // Partial Fisher-Yates: the first `keep` cells become a uniform sample.
    for (int i = 0; i < keep; ++i) {
      std::uniform_int_distribution<int> pick(i, static_cast<int>(cells.size()) - 1);
      std::swap(cells[i], cells[pick(rng)]);
    }
    cells.resize(keep);
    std::sort(cells.begin(), cells.end());
  }
  std::vector<CouplingPair> pairs;
  pairs.reserve(cells.size());
  for (int cell : cells) {
    CouplingPair p;
    p.instance_a = cell / nb;
    p.instance_b = cell % nb;
    const Instance &a = bag_a.instances[p.instance_a];
    const Instance &b = bag_b.instances[p.instance_b];
    p.target_verb = SimilarityTarget(VerbPhrase(a), VerbPhrase(b), embeddings);
    p.target_entity = SimilarityTarget(EntityPhrase(a), EntityPhrase(b), embeddings);
    pairs.push_back(p);
  }
  return pairs;
}

Var CouplingPairLoss(Var g, const CouplingPair &pair) {
  if (g.value().size() != 2) {
    throw ShapeError("coupling loss: expected two outputs, got shape " + ShapeString(g.shape()));
  }
  const int defined = (pair.target_verb ? 1 : 0) + (pair.target_entity ? 1 : 0);
  if (defined == 0) return Var();
  Tape &tape = *g.tape();
  Tensor target(g.shape(), 0.0);
  Tensor mask(g.shape(), 0.0);
  if (pair.target_verb) {
    target[0] = *pair.target_verb;
    mask[0] = 1.0;
  }
  if (pair.target_entity) {
    target[1] = *pair.target_entity;
    mask[1] = 1.0;
  }
  Var err = Mul(SquaredError(g, tape.Constant(std::move(target))), tape.Constant(std::move(mask)));
  return Scale(Sum(err), 1.0 / defined);
}

}  // namespace dsre
