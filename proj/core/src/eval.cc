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

#include "dsre/eval.h"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "dsre/errors.h"
#include "dsre/io.h"
#include "dsre/tape.h"

namespace dsre {
namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string General(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string VerbKey(const Instance &inst) {
  std::string key;
  for (const auto &t : VerbPhrase(inst)) key += (key.empty() ? "" : " ") + t;
  return key;
}

}  // namespace

GoldFacts ParseGoldFacts(std::string_view text, const std::string &source) {
  GoldFacts facts;
  int line_no = 0;
  for (const std::string &raw : SplitString(text, '\n')) {
    ++line_no;
    if (Trim(raw).empty()) continue;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = SplitString(line, '\t');
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      throw ParseError(source, line_no, "expected e1_id<TAB>e2_id<TAB>relation");
    }
    if (fields[2] == kNaRelation) continue;
    facts.emplace(PairId{fields[0], fields[1]}, fields[2]);
  }
  return facts;
}

GoldFacts LoadGoldFacts(const std::string &path) { return ParseGoldFacts(ReadFile(path), path); }

std::string SerializeGoldFacts(const GoldFacts &facts) {
  std::string out;
  for (const auto &[pair, rel] : facts) out += pair.e1 + "\t" + pair.e2 + "\t" + rel + "\n";
  return out;
}

GoldFacts GoldFromBags(const std::vector<InstanceBag> &bags) {
  GoldFacts facts;
  for (const auto &bag : bags) {
    for (const auto &rel : bag.relations) facts.emplace(bag.pair, rel);
  }
  return facts;
}

BagScorer::BagScorer(const Model &model, const StaticEmbeddings &embeddings)
    : model_(model),
      embeddings_(embeddings),
      rep_means_(RepresentativeMeans(model.representatives, embeddings)) {}

BagScorer::Result BagScorer::Score(const InstanceBag &bag) const {
  Tape tape;
  const ModelVars vars = BindModel(tape, model_);
  const PreparedBag prepared = PrepareBag(model_, bag, embeddings_, rep_means_);
  const BagForward fwd = ForwardBag(vars, prepared, model_.config.memory.hops);
  Result r;
  const auto scores = fwd.memory.scores.value().data();
  r.scores.assign(scores.begin(), scores.end());
  r.trace = TraceOf(bag.pair, fwd.memory);
  return r;
}

namespace {

std::vector<InstanceBag> FitToCapacity(const std::vector<InstanceBag> &bags, int capacity) {
  std::vector<InstanceBag> out = bags;
  bool warned = false;
  for (auto &bag : out) {
    if (static_cast<int>(bag.instances.size()) > capacity) {
      if (!warned) {
        std::cerr << "warning: bags larger than memory capacity " << capacity
                  << " are truncated (first: " << bag.pair.ToString() << ")\n";
        warned = true;
      }
      bag.instances.resize(capacity);
    }
  }
  return out;
}

std::vector<BagScorer::Result> ScoreAll(const BagScorer &scorer,
                                        const std::vector<InstanceBag> &bags, int threads) {
  std::vector<BagScorer::Result> results(bags.size());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(bags.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < bags.size(); ++i) results[i] = scorer.Score(bags[i]);
    return results;
  }
  std::vector<std::thread> workers;
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < bags.size(); i += threads) results[i] = scorer.Score(bags[i]);
    });
  }
  for (auto &t : workers) t.join();
  return results;
}

}  // namespace

std::vector<Prediction> ScoreCorpus(const Model &model, const std::vector<InstanceBag> &bags,
                                    const StaticEmbeddings &embeddings, int threads) {
  const auto fitted = FitToCapacity(bags, model.config.memory.memory_capacity);
  const BagScorer scorer(model, embeddings);
  const auto results = ScoreAll(scorer, fitted, threads);
  std::vector<Prediction> preds;
  preds.reserve(bags.size() * (model.schema.size() - 1));
  for (std::size_t b = 0; b < fitted.size(); ++b) {
    for (int r = 1; r < model.schema.size(); ++r) {
      preds.push_back(Prediction{fitted[b].pair, model.schema.name(r), results[b].scores[r]});
    }
  }
  std::sort(preds.begin(), preds.end(), [](const Prediction &a, const Prediction &b) {
    return std::tie(a.pair, a.relation) < std::tie(b.pair, b.relation);
  });
  return preds;
}

PrCurve ComputePrCurve(std::vector<Prediction> predictions, const GoldFacts &gold) {
  if (gold.empty()) throw Error("pr_curve: gold fact set is empty");
  std::sort(predictions.begin(), predictions.end(), [](const Prediction &a, const Prediction &b) {
    if (a.score != b.score) return a.score > b.score;
    return std::tie(a.pair, a.relation) < std::tie(b.pair, b.relation);
  });
  PrCurve curve;
  int hits = 0;
  const double total = static_cast<double>(gold.size());
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    const Prediction &p = predictions[k];
    PrPoint pt;
    pt.rank = static_cast<int>(k) + 1;
    pt.score = p.score;
    pt.correct = gold.count({p.pair, p.relation}) > 0;
    if (pt.correct) ++hits;
    pt.precision = static_cast<double>(hits) / pt.rank;
    pt.recall = hits / total;
    curve.points.push_back(pt);
  }
  curve.auc = TrapezoidAuc(curve.points);
  return curve;
}

double TrapezoidAuc(std::span<const PrPoint> points) {
  if (points.empty()) return 0.0;
  double area = points[0].recall * points[0].precision;
  for (std::size_t k = 1; k < points.size(); ++k) {
    area += (points[k].recall - points[k - 1].recall) *
            (points[k].precision + points[k - 1].precision) / 2.0;
  }
  return area;
}

std::string FormatPrCsv(const PrCurve &curve) {
  std::string out = "rank,score,correct,precision,recall\n";
  for (const PrPoint &p : curve.points) {
    out += std::to_string(p.rank) + "," + General(p.score) + "," + (p.correct ? "1" : "0") + "," +
           General(p.precision) + "," + General(p.recall) + "\n";
  }
  return out;
}

ClassificationMetrics ClassificationFromLabels(const RelationSchema &schema,
                                               std::span<const int> predicted,
                                               std::span<const std::vector<int>> gold) {
  if (predicted.size() != gold.size()) throw Error("classification: size mismatch");
  const int R = schema.size();
  std::vector<int> tp(R, 0), fp(R, 0), fn(R, 0);
  int correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const auto &g = gold[i];
    const int p = predicted[i];
    const bool in_gold =
        std::find(g.begin(), g.end(), p) != g.end() || (g.empty() && p == 0);
    if (in_gold) ++correct;
    for (int r = 1; r < R; ++r) {
      const bool gold_r = std::find(g.begin(), g.end(), r) != g.end();
      if (p == r && gold_r) ++tp[r];
      if (p == r && !gold_r) ++fp[r];
      if (p != r && gold_r) ++fn[r];
    }
  }
  ClassificationMetrics m;
  m.f1.assign(R, 0.0);
  int counted = 0;
  double sum = 0.0;
  for (int r = 1; r < R; ++r) {
    const int denom = 2 * tp[r] + fp[r] + fn[r];
    if (denom == 0) continue;
    m.f1[r] = 2.0 * tp[r] / denom;
    sum += m.f1[r];
    ++counted;
  }
  m.macro_f1 = counted > 0 ? sum / counted : 0.0;
  m.accuracy = predicted.empty() ? 0.0 : static_cast<double>(correct) / predicted.size();
  return m;
}

ClassificationMetrics EvaluateClassification(const Model &model,
                                             const std::vector<InstanceBag> &bags,
                                             const StaticEmbeddings &embeddings) {
  const auto fitted = FitToCapacity(bags, model.config.memory.memory_capacity);
  const BagScorer scorer(model, embeddings);
  std::vector<int> predicted;
  std::vector<std::vector<int>> gold;
  for (const auto &bag : fitted) {
    const auto result = scorer.Score(bag);
    predicted.push_back(static_cast<int>(
        std::max_element(result.scores.begin(), result.scores.end()) - result.scores.begin()));
    std::vector<int> labels;
    for (const auto &rel : bag.relations) labels.push_back(model.schema.IndexOf(rel));
    gold.push_back(std::move(labels));
  }
  return ClassificationFromLabels(model.schema, predicted, gold);
}

std::vector<AttentionTrace> TraceCorpus(const Model &model, const std::vector<InstanceBag> &bags,
                                        const StaticEmbeddings &embeddings) {
  const auto fitted = FitToCapacity(bags, model.config.memory.memory_capacity);
  const BagScorer scorer(model, embeddings);
  std::vector<AttentionTrace> traces;
  for (const auto &bag : fitted) traces.push_back(scorer.Score(bag).trace);
  return traces;
}

std::string FormatAttentionTsv(const std::vector<AttentionTrace> &traces) {
  std::string out;
  for (const auto &trace : traces) {
    const std::string pair = trace.pair.ToString();
    for (std::size_t k = 0; k < trace.hops.size(); ++k) {
      for (std::size_t i = 0; i < trace.hops[k].size(); ++i) {
        out += pair + "\t" + std::to_string(i) + "\t" + std::to_string(k + 1) + "\t" +
               Fixed(trace.hops[k][i], 3) + "\n";
      }
    }
  }
  return out;
}

std::string FormatAttentionTable(const std::vector<InstanceBag> &bags,
                                 const std::vector<AttentionTrace> &traces) {
  std::map<PairId, const InstanceBag *> by_pair;
  for (const auto &bag : bags) by_pair[bag.pair] = &bag;
  std::ostringstream out;
  for (const auto &trace : traces) {
    const InstanceBag *bag = by_pair.count(trace.pair) ? by_pair[trace.pair] : nullptr;
    out << "== " << trace.pair.ToString();
    if (bag != nullptr && !bag->relations.empty()) {
      out << "  [";
      for (std::size_t r = 0; r < bag->relations.size(); ++r) {
        out << (r ? ", " : "") << bag->relations[r];
      }
      out << "]";
    }
    out << "\n";
    out << "  #  ";
    for (std::size_t k = 0; k < trace.hops.size(); ++k) out << " Hop " << (k + 1) << " ";
    out << " Sentence\n";
    const std::size_t n = trace.hops.empty() ? 0 : trace.hops[0].size();
    for (std::size_t i = 0; i < n; ++i) {
      char idx[32];
      std::snprintf(idx, sizeof(idx), "%3zu  ", i);
      out << idx;
      for (std::size_t k = 0; k < trace.hops.size(); ++k) {
        out << " " << Fixed(trace.hops[k][i], 3) << " ";
      }
      out << " ";
      if (bag != nullptr && i < bag->instances.size()) out << bag->instances[i].Text();
      out << "\n";
    }
    out << "\n";
  }
  return out.str();
}

void MajorityVerbBaseline::Fit(const std::vector<InstanceBag> &training,
                               const RelationSchema &schema) {
  schema_ = schema;
  prior_.assign(schema.size(), 0);
  std::map<std::string, std::vector<int>> counts;
  for (const auto &bag : training) {
    std::vector<int> labels;
    for (const auto &rel : bag.relations) labels.push_back(schema.IndexOf(rel));
    if (labels.empty()) labels.push_back(0);
    for (int r : labels) ++prior_[r];
    for (const auto &inst : bag.instances) {
      auto &c = counts[VerbKey(inst)];
      c.resize(schema.size(), 0);
      for (int r : labels) ++c[r];
    }
  }
  verb_counts_.assign(counts.begin(), counts.end());
}

int MajorityVerbBaseline::Predict(const InstanceBag &bag) const {
  std::vector<double> votes(schema_.size(), 0.0);
  for (const auto &inst : bag.instances) {
    const std::string key = VerbKey(inst);
    auto it = std::lower_bound(verb_counts_.begin(), verb_counts_.end(), key,
                               [](const auto &entry, const std::string &k) { return entry.first < k; });
    if (it == verb_counts_.end() || it->first != key) continue;
    const int best = static_cast<int>(std::max_element(it->second.begin(), it->second.end()) -
                                      it->second.begin());
    votes[best] += 1.0;
  }
  if (std::all_of(votes.begin(), votes.end(), [](double v) { return v == 0.0; })) {
    return static_cast<int>(std::max_element(prior_.begin(), prior_.end()) - prior_.begin());
  }
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<Prediction> MajorityVerbBaseline::ScoreCorpus(
    const std::vector<InstanceBag> &bags) const {
  std::vector<Prediction> preds;
  for (const auto &bag : bags) {
    std::vector<double> votes(schema_.size(), 1e-3);
    for (const auto &inst : bag.instances) {
      const std::string key = VerbKey(inst);
      auto it = std::lower_bound(verb_counts_.begin(), verb_counts_.end(), key,
                                 [](const auto &entry, const std::string &k) { return entry.first < k; });
      if (it == verb_counts_.end() || it->first != key) continue;
      double total = 0.0;
      for (int c : it->second) total += c;
      for (int r = 0; r < schema_.size(); ++r) votes[r] += it->second[r] / total;
    }
    double total = 0.0;
    for (double v : votes) total += v;
    for (int r = 1; r < schema_.size(); ++r) {
      preds.push_back(Prediction{bag.pair, schema_.name(r), votes[r] / total});
    }
  }
  return preds;
}

}  // namespace dsre
