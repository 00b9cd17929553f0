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

#include "dsre/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "dsre/checkpoint.h"
#include "dsre/errors.h"
#include "dsre/eval.h"
#include "dsre/io.h"

namespace dsre {
namespace {

constexpr std::uint64_t kShuffleStream = 0x9e3779b97f4a7c15ULL;

std::vector<std::string> BatchPairIds(const BatchPlan &plan) {
  std::vector<std::string> ids;
  for (const PreparedBag *b : plan.bags) ids.push_back(b->bag->pair.ToString());
  return ids;
}

}  // namespace

std::vector<TrainingExample> ExpandExamples(const std::vector<InstanceBag> &bags,
                                            const RelationSchema &schema) {
  std::vector<TrainingExample> out;
  for (std::size_t b = 0; b < bags.size(); ++b) {
    if (bags[b].relations.empty()) {
      out.push_back({static_cast<int>(b), 0});
      continue;
    }
    for (const auto &rel : bags[b].relations) {
      out.push_back({static_cast<int>(b), schema.IndexOf(rel)});
    }
  }
  return out;
}

BatchPlan PlanBatch(std::span<const TrainingExample> examples,
                    std::span<const PreparedBag> prepared, double lambda_couple, int m_max,
                    std::mt19937_64 &rng, const StaticEmbeddings &embeddings) {
  if (examples.empty()) throw Error("total_loss: empty batch");
  BatchPlan plan;
  for (const auto &ex : examples) {
    plan.bags.push_back(&prepared[ex.bag]);
    plan.labels.push_back(ex.label);
  }
  if (lambda_couple == 0.0) return plan;
  for (std::size_t k = 0; k + 1 < examples.size(); k += 2) {
    const InstanceBag &a = *plan.bags[k]->bag;
    const InstanceBag &b = *plan.bags[k + 1]->bag;
    if (a.pair == b.pair) continue;
    BatchPlan::Coupled c;
    c.first = static_cast<int>(k);
    c.second = static_cast<int>(k + 1);
    c.pairs = SampleCouplingPairs(a, b, m_max, rng, embeddings);
    plan.couplings.push_back(std::move(c));
  }
  return plan;
}

LossTerms TotalLoss(const ModelVars &vars, const BatchPlan &plan, double lambda_couple,
                    int hops) {
  if (plan.bags.empty()) throw Error("total_loss: empty batch");
  std::vector<BagForward> forwards;
  forwards.reserve(plan.bags.size());
  std::vector<Var> relation_terms;
  for (std::size_t i = 0; i < plan.bags.size(); ++i) {
    forwards.push_back(ForwardBag(vars, *plan.bags[i], hops));
    relation_terms.push_back(CrossEntropyWithLogits(forwards.back().memory.logits, plan.labels[i]));
  }
  LossTerms terms;
  terms.relation = Mean(Concat(relation_terms, 0));
  terms.total = terms.relation;
  if (lambda_couple == 0.0) return terms;

  std::vector<Var> pair_terms;
  for (const auto &c : plan.couplings) {
    const auto &enc_a = forwards[c.first].encodings;
    const auto &enc_b = forwards[c.second].encodings;
    for (const CouplingPair &p : c.pairs) {
      Var g = CouplingForward(vars.coupling, enc_a[p.instance_a], enc_b[p.instance_b]);
      Var loss = CouplingPairLoss(g, p);
      if (loss.valid()) pair_terms.push_back(loss);
    }
  }
  terms.coupling_pairs = static_cast<int>(pair_terms.size());
  if (pair_terms.empty()) return terms;
  terms.coupling = Mean(Concat(pair_terms, 0));
  terms.total = Add(terms.relation, Scale(terms.coupling, lambda_couple));
  return terms;
}

std::vector<Var> ParameterVars(const ModelVars &vars) {
  std::vector<Var> out = {vars.encoder.word_table, vars.encoder.pos_table,
                          vars.encoder.position1_table, vars.encoder.position2_table};
  for (const auto &f : vars.encoder.filters) {
    out.push_back(f.weight);
    out.push_back(f.bias);
  }
  for (Var v : {vars.memory.memory_proj, vars.memory.output_proj, vars.memory.hop_transition,
                vars.memory.relation_weight, vars.memory.relation_bias, vars.coupling.weight,
                vars.coupling.bias}) {
    out.push_back(v);
  }
  return out;
}

Trainer::Trainer(const TrainConfig &config, std::vector<InstanceBag> training,
                 RelationSchema schema, const StaticEmbeddings &embeddings)
    : config_(config),
      training_(std::move(training)),
      embeddings_(embeddings),
      adam_(AdamOptions{.learning_rate = config.learning_rate}),
      rng_(config.seed ^ kShuffleStream) {
  config_.Validate();
  TruncateBags(training_, config_.model.memory.memory_capacity);
  training_.erase(std::remove_if(training_.begin(), training_.end(),
                                 [](const InstanceBag &b) { return b.instances.empty(); }),
                  training_.end());
  model_ = InitModel(config_.model, training_, schema, embeddings_, config_.seed);
  const auto rep_means = RepresentativeMeans(model_.representatives, embeddings_);
  prepared_.reserve(training_.size());
  for (const auto &bag : training_) {
    prepared_.push_back(PrepareBag(model_, bag, embeddings_, rep_means));
  }
  examples_ = ExpandExamples(training_, model_.schema);
}

double Trainer::Step(std::span<const TrainingExample> batch) {
  const BatchPlan plan =
      PlanBatch(batch, prepared_, config_.lambda_couple, config_.m_max, rng_, embeddings_);
  Tape tape;
  const ModelVars vars = BindModel(tape, model_);
  const LossTerms terms = TotalLoss(vars, plan, config_.lambda_couple, config_.model.memory.hops);
  const double loss = terms.total.value().item();
  if (!std::isfinite(loss)) throw NonFiniteLossError(BatchPairIds(plan));
  tape.Backward(terms.total);

  auto named = model_.params.Named();
  const auto vars_in_order = ParameterVars(vars);
  std::vector<Tensor *> params;
  std::vector<const Tensor *> grads;
  for (std::size_t i = 0; i < named.size(); ++i) {
    params.push_back(named[i].second);
    grads.push_back(&tape.grad(vars_in_order[i]));
  }
  adam_.Apply(params, grads);
  if (!model_.params.AllFinite()) throw NonFiniteLossError(BatchPairIds(plan));
  return loss;
}

double Trainer::RunEpoch() {
  if (examples_.empty()) throw Error("training corpus has no examples");
  std::vector<TrainingExample> order = examples_;
  std::shuffle(order.begin(), order.end(), rng_);
  double total = 0.0;
  int batches = 0;
  for (std::size_t start = 0; start < order.size(); start += config_.batch_bags) {
    const std::size_t end = std::min(order.size(), start + config_.batch_bags);
    total += Step(std::span<const TrainingExample>(order).subspan(start, end - start));
    ++batches;
  }
  ++epoch_;
  return total / batches;
}

double Trainer::EvaluateLoss() const {
  if (examples_.empty()) throw Error("training corpus has no examples");
  std::mt19937_64 rng(config_.seed);
  double total = 0.0;
  int batches = 0;
  for (std::size_t start = 0; start < examples_.size(); start += config_.batch_bags) {
    const std::size_t end = std::min(examples_.size(), start + config_.batch_bags);
    const auto batch = std::span<const TrainingExample>(examples_).subspan(start, end - start);
    const BatchPlan plan =
        PlanBatch(batch, prepared_, config_.lambda_couple, config_.m_max, rng, embeddings_);
    Tape tape;
    const ModelVars vars = BindModel(tape, model_);
    total += TotalLoss(vars, plan, config_.lambda_couple, config_.model.memory.hops)
                 .total.value()
                 .item();
    ++batches;
  }
  return total / batches;
}

std::string FormatMetricsCsv(const std::vector<EpochMetrics> &metrics) {
  std::string out = "epoch,train_loss,dev_auc_pr\n";
  char buf[96];
  for (const auto &m : metrics) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,", m.epoch, m.train_loss);
    out += buf;
    if (m.dev_auc_pr) {
      std::snprintf(buf, sizeof(buf), "%.9g", *m.dev_auc_pr);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

TrainResult Train(const TrainConfig &config) {
  config.Validate();
  if (config.corpus.empty() || config.schema.empty() || config.embeddings.empty() ||
      config.output_dir.empty()) {
    throw Error("training needs corpus, schema, embeddings and output_dir");
  }
  const CorpusOptions options{config.model.memory.memory_capacity, config.max_sentence_len};
  auto training = LoadCorpus(config.corpus, options);
  RelationSchema schema = RelationSchema::Load(config.schema);
  const StaticEmbeddings embeddings = StaticEmbeddings::Load(config.embeddings);

  std::vector<InstanceBag> dev;
  GoldFacts dev_gold;
  if (!config.dev_corpus.empty()) {
    dev = LoadCorpus(config.dev_corpus, options);
    dev_gold = config.dev_gold.empty() ? GoldFromBags(dev) : LoadGoldFacts(config.dev_gold);
  }

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw FileError(config.output_dir, "cannot create directory");
  const std::filesystem::path root(config.output_dir);
  auto checkpoint_path = [&](int epoch) {
    char name[32];
    std::snprintf(name, sizeof(name), "epoch_%04d.ckpt", epoch);
    return (root / name).string();
  };

  Trainer trainer(config, std::move(training), std::move(schema), embeddings);
  SaveCheckpoint(checkpoint_path(0), trainer.model(), config);

  TrainResult result;
  const std::string metrics_path = (root / "metrics.csv").string();
  WriteFileAtomic(metrics_path, FormatMetricsCsv(result.metrics));
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = trainer.RunEpoch();
    if (!dev.empty() && !dev_gold.empty()) {
      m.dev_auc_pr = ComputePrCurve(ScoreCorpus(trainer.model(), dev, embeddings), dev_gold).auc;
    }
    result.metrics.push_back(m);
    WriteFileAtomic(metrics_path, FormatMetricsCsv(result.metrics));
    if (config.checkpoint_every > 0 && epoch % config.checkpoint_every == 0) {
      SaveCheckpoint(checkpoint_path(epoch), trainer.model(), config);
    }
  }
  result.final_checkpoint = (root / "final.ckpt").string();
  SaveCheckpoint(result.final_checkpoint, trainer.model(), config);
  return result;
}

}  // namespace dsre
