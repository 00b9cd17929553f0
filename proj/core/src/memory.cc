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

#include "dsre/memory.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <tuple>

#include "dsre/errors.h"

namespace dsre {
namespace {

Tensor Glorot(int rows, int cols, std::mt19937_64 &rng) {
  const double limit = std::sqrt(6.0 / (rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Tensor t(Shape{rows, cols});
  for (double &v : t.data()) v = dist(rng);
  return t;
}

std::vector<std::string> TokenTexts(const Instance &inst) {
  std::vector<std::string> out;
  out.reserve(inst.tokens.size());
  for (const Token &t : inst.tokens) out.push_back(t.text);
  return out;
}

}  // namespace

MemoryParams InitMemoryParams(const MemoryConfig &config, int num_relations,
                              std::mt19937_64 &rng) {
  if (config.hops < 1) throw Error("memory network needs at least one hop");
  if (config.latent_dim < 1) throw Error("latent dimension must be positive");
  const int d = config.latent_dim;
  MemoryParams p;
  p.memory_proj = Glorot(d, d, rng);
  p.output_proj = Glorot(d, d, rng);
  p.hop_transition = Glorot(d, d, rng);
  p.relation_weight = Glorot(num_relations, d, rng);
  p.relation_bias = Tensor(Shape{num_relations}, 0.0);
  return p;
}

MemoryVars BindMemory(Tape &tape, const MemoryParams &params) {
  return MemoryVars{tape.Parameter(params.memory_proj), tape.Parameter(params.output_proj),
                    tape.Parameter(params.hop_transition),
                    tape.Parameter(params.relation_weight),
                    tape.Parameter(params.relation_bias)};
}

MemoryOutput MemNetForward(const MemoryVars &vars, std::span<const Var> encodings,
                           std::span<const double> heuristic, int hops) {
  if (encodings.empty()) throw Error("memnet_forward: empty bag");
  if (heuristic.size() != encodings.size()) {
    throw ShapeError("memnet_forward: " + std::to_string(heuristic.size()) +
                     " heuristic weights for " + std::to_string(encodings.size()) +
                     " instances");
  }
  if (hops < 1) throw Error("memnet_forward: hops must be >= 1");
  Tape &tape = *encodings[0].tape();
  const int bag = static_cast<int>(encodings.size());

  Var stacked = Concat(encodings, 0);                    // B x d
  Var memory = MatMulBT(stacked, vars.memory_proj);      // rows m_i
  Var output = MatMulBT(stacked, vars.output_proj);      // rows c_i
  Var weights = tape.Constant(
      Tensor(Shape{1, bag}, std::vector<double>(heuristic.begin(), heuristic.end())));
  Var query = MatMul(weights, memory);                   // u_1

  MemoryOutput out;
  for (int k = 0; k < hops; ++k) {
    Var attention = Softmax(MatMulBT(query, memory), 1);  // 1 x B
    Var response = MatMul(attention, output);              // o_k
    query = Add(MatMulBT(query, vars.hop_transition), response);
    out.attention.push_back(attention);
  }
  out.logits = AddRowBias(MatMulBT(query, vars.relation_weight), vars.relation_bias);
  out.scores = Softmax(out.logits, 1);
  return out;
}

AttentionTrace TraceOf(const PairId &pair, const MemoryOutput &output) {
  AttentionTrace trace;
  trace.pair = pair;
  for (Var a : output.attention) {
    const auto values = a.value().data();
    trace.hops.emplace_back(values.begin(), values.end());
  }
  return trace;
}

std::vector<std::string> RelationPhraseTokens(std::string_view relation_id) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (char c : relation_id) {
    if (c == '/' || c == '_' || c == '.') {
      flush();
    } else {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  flush();
  return out;
}

RepresentativeSet SelectRepresentatives(const std::vector<InstanceBag> &training,
                                        const RelationSchema &schema) {
  RepresentativeSet reps;
  for (int r = 1; r < schema.size(); ++r) {
    const auto phrase = RelationPhraseTokens(schema.name(r));
    const std::set<std::string> wanted(phrase.begin(), phrase.end());
    Representative rep;
    rep.relation = schema.name(r);
    const Instance *best = nullptr;
    std::string best_text;
    for (const InstanceBag &bag : training) {
      for (const Instance &inst : bag.instances) {
        const bool matches = std::any_of(inst.tokens.begin(), inst.tokens.end(),
                                         [&](const Token &t) { return wanted.count(t.text) > 0; });
        if (!matches) continue;
        std::string text = inst.Text();
        if (best == nullptr ||
            std::forward_as_tuple(inst.tokens.size(), text, inst.sentence_id) <
                std::forward_as_tuple(best->tokens.size(), best_text, best->sentence_id)) {
          best = &inst;
          best_text = std::move(text);
        }
      }
    }
    if (best != nullptr) {
      rep.sentence_id = best->sentence_id;
      rep.tokens = TokenTexts(*best);
      rep.empty = false;
    }
    reps.entries.push_back(std::move(rep));
  }
  return reps;
}

std::vector<std::vector<double>> RepresentativeMeans(const RepresentativeSet &reps,
                                                     const StaticEmbeddings &embeddings) {
  std::vector<std::vector<double>> means;
  for (const Representative &rep : reps.entries) {
    if (rep.empty) continue;
    means.push_back(embeddings.MeanVector(rep.tokens));
  }
  return means;
}

std::vector<double> HeuristicAttention(std::span<const Instance> instances,
                                       std::span<const std::vector<double>> rep_means,
                                       const StaticEmbeddings &embeddings) {
  std::vector<double> scores;
  scores.reserve(instances.size());
  for (const Instance &inst : instances) {
    const auto mean = embeddings.MeanVector(TokenTexts(inst));
    double best = 0.0;
    bool any = false;
    for (const auto &rep : rep_means) {
      const double s = Cosine(mean, rep);
      if (!any || s > best) best = s;
      any = true;
    }
    scores.push_back(best);
  }
  return SoftmaxValues(scores);
}

std::vector<double> HeuristicAttention(const InstanceBag &bag, const RepresentativeSet &reps,
                                       const StaticEmbeddings &embeddings) {
  const auto means = RepresentativeMeans(reps, embeddings);
  return HeuristicAttention(bag.instances, means, embeddings);
}

}  // namespace dsre
