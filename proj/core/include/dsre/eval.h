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

#ifndef DSRE_EVAL_H_
#define DSRE_EVAL_H_

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsre/corpus.h"
#include "dsre/embeddings.h"
#include "dsre/memory.h"
#include "dsre/model.h"

namespace dsre {

struct Prediction {
  PairId pair;
  std::string relation;  // never NA
  double score = 0.0;
};

// Lines "e1_id<TAB>e2_id<TAB>relation".
GoldFacts ParseGoldFacts(std::string_view text, const std::string &source);
GoldFacts LoadGoldFacts(const std::string &path);
std::string SerializeGoldFacts(const GoldFacts &facts);
// Non-NA relations attached to the bags themselves.
GoldFacts GoldFromBags(const std::vector<InstanceBag> &bags);

// Read-only scoring of bags with a fixed model; safe to share across threads.
class BagScorer {
 public:
  BagScorer(const Model &model, const StaticEmbeddings &embeddings);

  struct Result {
    std::vector<double> scores;  // softmax over the whole schema, NA included
    AttentionTrace trace;
  };
  Result Score(const InstanceBag &bag) const;

  const Model &model() const { return model_; }

 private:
  const Model &model_;
  const StaticEmbeddings &embeddings_;
  std::vector<std::vector<double>> rep_means_;
};

// Scores every bag; bags beyond memory capacity are truncated (one warning
// on stderr). Output order is (pair, relation) regardless of `threads`.
std::vector<Prediction> ScoreCorpus(const Model &model, const std::vector<InstanceBag> &bags,
                                    const StaticEmbeddings &embeddings, int threads = 1);

struct PrPoint {
  int rank = 0;
  double score = 0.0;
  bool correct = false;
  double precision = 0.0;
  double recall = 0.0;
};

struct PrCurve {
  std::vector<PrPoint> points;
  double auc = 0.0;
};

// Ranks by descending score (ties: pair, then relation) and accumulates
// precision and recall against `gold`. Throws when `gold` is empty.
PrCurve ComputePrCurve(std::vector<Prediction> predictions, const GoldFacts &gold);
// Trapezoid area under (recall, precision), starting from recall 0 at the
// first point's precision.
double TrapezoidAuc(std::span<const PrPoint> points);
// "rank,score,correct,precision,recall" rows.
std::string FormatPrCsv(const PrCurve &curve);

struct ClassificationMetrics {
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::vector<double> f1;  // per schema index; NA entry unused
};

// Arg-max relation per bag against the bag's own labels.
ClassificationMetrics EvaluateClassification(const Model &model,
                                             const std::vector<InstanceBag> &bags,
                                             const StaticEmbeddings &embeddings);
ClassificationMetrics ClassificationFromLabels(const RelationSchema &schema,
                                               std::span<const int> predicted,
                                               std::span<const std::vector<int>> gold);

std::vector<AttentionTrace> TraceCorpus(const Model &model, const std::vector<InstanceBag> &bags,
                                        const StaticEmbeddings &embeddings);
// "pair_id<TAB>instance_index<TAB>hop<TAB>probability", hops 1-based.
std::string FormatAttentionTsv(const std::vector<AttentionTrace> &traces);
// One block per bag: rows are instances, columns are hops.
std::string FormatAttentionTable(const std::vector<InstanceBag> &bags,
                                 const std::vector<AttentionTrace> &traces);

// Directional baseline: each bag takes the relation whose training bags most
// often used the bag's most frequent verb phrase.
class MajorityVerbBaseline {
 public:
  void Fit(const std::vector<InstanceBag> &training, const RelationSchema &schema);
  int Predict(const InstanceBag &bag) const;
  std::vector<Prediction> ScoreCorpus(const std::vector<InstanceBag> &bags) const;

 private:
  RelationSchema schema_;
  std::vector<std::pair<std::string, std::vector<int>>> verb_counts_;  // sorted by verb
  std::vector<int> prior_;
};

}  // namespace dsre

#endif  // DSRE_EVAL_H_
