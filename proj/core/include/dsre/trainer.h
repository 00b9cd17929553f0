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

#ifndef DSRE_TRAINER_H_
#define DSRE_TRAINER_H_

#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dsre/adam.h"
#include "dsre/config.h"
#include "dsre/corpus.h"
#include "dsre/coupling.h"
#include "dsre/embeddings.h"
#include "dsre/model.h"

namespace dsre {

// One (bag, gold relation) pair; multi-label bags yield one example per
// relation and NA bags a single example with label 0.
struct TrainingExample {
  int bag = 0;
  int label = 0;
};

std::vector<TrainingExample> ExpandExamples(const std::vector<InstanceBag> &bags,
                                            const RelationSchema &schema);

struct BatchPlan {
  std::vector<const PreparedBag *> bags;
  std::vector<int> labels;
  struct Coupled {
    int first = 0;   // positions within `bags`
    int second = 0;
    std::vector<CouplingPair> pairs;
  };
  std::vector<Coupled> couplings;
};

// Couples example 2k with 2k+1 (skipped when both come from the same entity
// pair). No pairs are drawn when `lambda_couple` is 0.
BatchPlan PlanBatch(std::span<const TrainingExample> examples,
                    std::span<const PreparedBag> prepared, double lambda_couple, int m_max,
                    std::mt19937_64 &rng, const StaticEmbeddings &embeddings);

struct LossTerms {
  Var total;
  Var relation;
  Var coupling;  // invalid when no coupling pair contributes
  int coupling_pairs = 0;
};

// Mean relation cross-entropy plus lambda_couple times the mean masked
// coupling error over all sampled pairs of the batch.
LossTerms TotalLoss(const ModelVars &vars, const BatchPlan &plan, double lambda_couple,
                    int hops);

// Tensors of `vars` in ModelParams::Named() order.
std::vector<Var> ParameterVars(const ModelVars &vars);

class Trainer {
 public:
  Trainer(const TrainConfig &config, std::vector<InstanceBag> training, RelationSchema schema,
          const StaticEmbeddings &embeddings);
  Trainer(const Trainer &) = delete;
  Trainer &operator=(const Trainer &) = delete;

  // One pass over the shuffled examples; returns the mean batch loss.
  double RunEpoch();
  // Mean loss over the training set in fixed order, no update.
  double EvaluateLoss() const;
  // One optimizer step on the given examples; returns the batch loss.
  double Step(std::span<const TrainingExample> batch);

  const Model &model() const { return model_; }
  Model &mutable_model() { return model_; }
  int epoch() const { return epoch_; }
  const std::vector<InstanceBag> &training() const { return training_; }
  const std::vector<TrainingExample> &examples() const { return examples_; }

 private:
  TrainConfig config_;
  std::vector<InstanceBag> training_;
  const StaticEmbeddings &embeddings_;
  Model model_;
  std::vector<PreparedBag> prepared_;
  std::vector<TrainingExample> examples_;
  Adam adam_;
  std::mt19937_64 rng_;
  int epoch_ = 0;
};

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;
  std::optional<double> dev_auc_pr;
};

std::string FormatMetricsCsv(const std::vector<EpochMetrics> &metrics);

struct TrainResult {
  std::vector<EpochMetrics> metrics;
  std::string final_checkpoint;
};

// File-driven training: reads corpus, schema and embeddings named in
// `config`, writes checkpoints (epoch_NNNN.ckpt, final.ckpt) and metrics.csv
// into config.output_dir.
TrainResult Train(const TrainConfig &config);

}  // namespace dsre

#endif  // DSRE_TRAINER_H_
