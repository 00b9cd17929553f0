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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.
//
//   dsre_acceptance <path-to-dsre-cli> [--only 1,4,7]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dsre/coupling.h"
#include "dsre/eval.h"
#include "dsre/gradcheck.h"
#include "dsre/io.h"
#include "dsre/memory.h"
#include "dsre/synthetic.h"
#include "dsre/trainer.h"
#include "test_util.h"

namespace dsre {
namespace {

using testing::MakeBag;
using testing::MakeInstance;
using testing::RandomTensor;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char *fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// Trains with the default configuration (optionally overriding lambda and
// seed) on an in-memory corpus.
void TrainDefault(Trainer &trainer, int epochs) {
  for (int e = 0; e < epochs; ++e) trainer.RunEpoch();
}

Outcome GradientFidelity() {
  const auto start = std::chrono::steady_clock::now();
  const GradCheckResult r = RunGradCheck();
  const double secs = Seconds(start);
  return {r.max_relative_error < 1e-4 && secs < 60.0,
          Fmt("max relative error %.3e over %.0f coordinates in %.1f s", r.max_relative_error,
              r.coordinates_checked, secs)};
}

Outcome AttentionNormalization() {
  std::mt19937_64 rng(2024);
  const MemoryConfig config{4, 10, 16};
  const int relations = 5;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const MemoryParams params = InitMemoryParams(config, relations, rng);
    Tape tape;
    const MemoryVars vars = BindMemory(tape, params);
    const int b = 1 + static_cast<int>(rng() % 10);
    std::vector<Var> enc;
    for (int i = 0; i < b; ++i) enc.push_back(tape.Constant(RandomTensor({1, 16}, rng, 3.0)));
    std::vector<double> logits(b);
    std::normal_distribution<double> n(0.0, 2.0);
    for (double &v : logits) v = n(rng);
    const std::vector<double> heuristic = SoftmaxValues(logits);
    const MemoryOutput out = MemNetForward(vars, enc, heuristic, config.hops);
    for (const Var &a : out.attention) {
      double s = 0.0;
      for (double p : a.value().data()) s += p;
      worst = std::max(worst, std::abs(s - 1.0));
    }
    double s = 0.0;
    for (double p : out.scores.value().data()) s += p;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return {worst <= 1e-6, Fmt("largest |sum - 1| = %.3e over 1000 bags", worst)};
}

Outcome CouplingAlgebra() {
  std::mt19937_64 rng(99);
  std::vector<std::pair<std::string, std::vector<double>>> vectors;
  std::normal_distribution<double> n(0.0, 1.0);
  for (int w = 0; w < 40; ++w) {
    std::vector<double> v(8);
    for (double &x : v) x = n(rng);
    vectors.emplace_back("w" + std::to_string(w), v);
  }
  const StaticEmbeddings emb = StaticEmbeddings::FromVectors(8, vectors);
  auto phrase = [&] {
    std::vector<std::string> p;
    const int len = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < len; ++i) p.push_back("w" + std::to_string(rng() % 45));  // some OOV
    return p;
  };
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    Tape tape;
    const int d = 1 + static_cast<int>(rng() % 32);
    const Var h1 = tape.Constant(RandomTensor({1, d}, rng, 5.0));
    const Var h2 = tape.Constant(RandomTensor({1, d}, rng, 5.0));
    const Tensor s12 = SymmetricFeatures(h1, h2).value();
    const Tensor s21 = SymmetricFeatures(h2, h1).value();
    const Tensor a12 = AsymmetricFeatures(h1, h2).value();
    const Tensor a21 = AsymmetricFeatures(h2, h1).value();
    if (!(s12 == s21)) ++violations;
    for (std::size_t i = 0; i < a12.size(); ++i) {
      if (a12[i] != -a21[i]) {
        ++violations;
        break;
      }
    }
    const auto pa = phrase(), pb = phrase();
    const auto tab = SimilarityTarget(pa, pb, emb);
    const auto tba = SimilarityTarget(pb, pa, emb);
    if (tab.has_value() != tba.has_value() || (tab && *tab != *tba)) ++violations;
    if (tab && (*tab < 0.0 || *tab > 1.0)) ++violations;
  }
  return {violations == 0, Fmt("%.0f violations over 10000 pairs", violations)};
}

Outcome SyntheticLearnability() {
  const auto start = std::chrono::steady_clock::now();
  const SyntheticCorpus corpus = GenerateSynthetic(SyntheticConfig{});
  const TrainConfig config;
  Trainer trainer(config, corpus.train, corpus.schema, corpus.embeddings);
  TrainDefault(trainer, config.epochs);
  const ClassificationMetrics m =
      EvaluateClassification(trainer.model(), corpus.test, corpus.embeddings);
  const double secs = Seconds(start);
  return {m.macro_f1 >= 0.95 && config.epochs <= 30 && secs < 300.0,
          Fmt("macro-F1 %.4f after %.0f epochs in %.1f s", m.macro_f1, config.epochs, secs)};
}

Outcome AttentionSelectsEvidence() {
  SyntheticConfig sc;
  sc.noise_rate = 0.5;
  const SyntheticCorpus corpus = GenerateSynthetic(sc);
  const TrainConfig config;
  Trainer trainer(config, corpus.train, corpus.schema, corpus.embeddings);
  TrainDefault(trainer, config.epochs);
  const auto traces = TraceCorpus(trainer.model(), corpus.test, corpus.embeddings);
  int eligible = 0, above = 0;
  for (std::size_t b = 0; b < corpus.test.size(); ++b) {
    const auto &bag = corpus.test[b];
    const auto &last = traces[b].hops.back();
    double mass = 0.0;
    int flagged = 0;
    for (std::size_t i = 0; i < bag.instances.size(); ++i) {
      if (corpus.evidence.at(bag.instances[i].sentence_id)) {
        mass += last[i];
        ++flagged;
      }
    }
    if (flagged == 0) continue;
    ++eligible;
    if (mass / flagged > 1.0 / static_cast<double>(bag.instances.size())) ++above;
  }
  const double share = eligible ? static_cast<double>(above) / eligible : 0.0;
  return {eligible > 0 && share >= 0.8,
          Fmt("%.1f%% of %.0f test bags with evidence exceed the uniform share", 100.0 * share,
              eligible)};
}

Outcome CouplingHelpsUnderNoise() {
  SyntheticConfig sc;
  sc.noise_rate = 0.3;
  const SyntheticCorpus corpus = GenerateSynthetic(sc);
  double mean[2] = {0.0, 0.0};
  const double lambdas[2] = {1.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    for (std::uint64_t seed : {1, 2, 3}) {
      TrainConfig config;
      config.seed = seed;
      config.lambda_couple = lambdas[k];
      Trainer trainer(config, corpus.train, corpus.schema, corpus.embeddings);
      TrainDefault(trainer, config.epochs);
      const PrCurve curve = ComputePrCurve(
          ScoreCorpus(trainer.model(), corpus.test, corpus.embeddings), corpus.test_gold);
      mean[k] += curve.auc / 3.0;
    }
  }
  return {mean[0] - mean[1] >= 0.01,
          Fmt("mean AUC-PR %.4f with coupling vs %.4f without (gap %.4f)", mean[0], mean[1],
              mean[0] - mean[1])};
}

Outcome PrOracle() {
  // Ranked [T, F, T, F] against two gold facts.
  const GoldFacts gold = {{PairId{"a", "b"}, "/r/x"}, {PairId{"c", "d"}, "/r/x"}};
  const std::vector<Prediction> preds = {{PairId{"c", "d"}, "/r/x", 0.4},
                                         {PairId{"a", "b"}, "/r/x", 0.9},
                                         {PairId{"e", "f"}, "/r/x", 0.1},
                                         {PairId{"a", "b"}, "/r/y", 0.7}};
  const PrCurve curve = ComputePrCurve(preds, gold);

  // Brute force: for each cut-off k count the gold hits among the k best.
  std::vector<Prediction> sorted = preds;
  std::sort(sorted.begin(), sorted.end(),
            [](const Prediction &a, const Prediction &b) { return a.score > b.score; });
  const double expect_p[] = {1.0, 0.5, 2.0 / 3.0, 0.5};
  const double expect_r[] = {0.5, 0.5, 1.0, 1.0};
  double worst = 0.0;
  bool ok = curve.points.size() == 4;
  for (int k = 1; ok && k <= 4; ++k) {
    int hits = 0;
    for (int i = 0; i < k; ++i) hits += gold.count({sorted[i].pair, sorted[i].relation});
    const double p = static_cast<double>(hits) / k;
    const double r = static_cast<double>(hits) / gold.size();
    const PrPoint &pt = curve.points[k - 1];
    worst = std::max({worst, std::abs(pt.precision - p), std::abs(pt.recall - r),
                      std::abs(pt.precision - expect_p[k - 1]),
                      std::abs(pt.recall - expect_r[k - 1])});
  }
  return {ok && worst <= 1e-9, Fmt("largest deviation %.3e", worst)};
}

int Run(const std::string &cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); }

Outcome Determinism(const std::string &cli) {
  namespace fs = std::filesystem;
  const fs::path dir = testing::TempDir("dsre_accept_det");
  const std::string d = dir.string();
  const std::string q = "'" + cli + "'";
  bool ok = Run(q + " gen-synthetic --out " + d + "/data --relations 3 --bags-per-relation 6"
                    " --bag-size 3 --embedding-dim 300 --seed 5") == 0;
  WriteFileAtomic(d + "/train.cfg",
                  "corpus = " + d + "/data/train.jsonl\n"
                  "schema = " + d + "/data/schema.txt\n"
                  "embeddings = " + d + "/data/embeddings.txt\n"
                  "dev_corpus = " + d + "/data/test.jsonl\n"
                  "dev_gold = " + d + "/data/gold.tsv\n"
                  "epochs = 2\n");
  for (const char *run : {"a", "b"}) {
    ok = ok && Run(q + " train --config " + d + "/train.cfg --out " + d + "/" + run) == 0;
    ok = ok && Run(q + " evaluate --checkpoint " + d + "/a/final.ckpt --corpus " + d +
                   "/data/test.jsonl --gold " + d + "/data/gold.tsv --out " + d + "/pr_" + run +
                   ".csv") == 0;
  }
  bool same_metrics = false, same_pr = false;
  if (ok) {
    same_metrics = ReadFile(d + "/a/metrics.csv") == ReadFile(d + "/b/metrics.csv");
    same_pr = ReadFile(d + "/pr_a.csv") == ReadFile(d + "/pr_b.csv");
  }
  fs::remove_all(dir);
  return {ok && same_metrics && same_pr,
          std::string("commands ") + (ok ? "succeeded" : "failed") + ", metrics " +
              (same_metrics ? "identical" : "differ") + ", PR curves " +
              (same_pr ? "identical" : "differ")};
}

Outcome CapacityAndRepresentatives() {
  std::ostringstream corpus;
  for (int i = 0; i < 14; ++i) {
    corpus << R"({"sentence_id":"s)" << i
           << R"(","tokens":[{"text":"Ann","pos":"NNP"},{"text":"met","pos":"VBD"},)"
              R"({"text":"Bo","pos":"NNP"}],"e1":{"id":"ann","span":[0,1]},)"
              R"("e2":{"id":"bo","span":[2,3]},"relations":["NA"]})"
           << "\n";
  }
  const auto bags = ParseCorpus(corpus.str(), "capacity");
  bool truncated = bags.size() == 1 && bags[0].instances.size() == 10;
  for (int i = 0; truncated && i < 10; ++i) {
    truncated = bags[0].instances[i].sentence_id == "s" + std::to_string(i);
  }

  const RelationSchema schema({"NA", "/business/person/company"});
  const auto long_one =
      MakeInstance("long", "the latest person to seek assistance from the firm is smith",
                   "DT JJS NN TO VB NN IN DT NN VBZ NNP", {8, 9}, {10, 11});
  const auto short_one = MakeInstance("short", "smith , a person at acme", "NNP , DT NN IN NNP",
                                      {0, 1}, {5, 6});
  const auto other = MakeInstance("other", "acme hired jones", "NNP VBD NNP", {0, 1}, {2, 3});
  const std::vector<InstanceBag> training = {
      MakeBag("firm", "smith", {long_one}, {"/business/person/company"}),
      MakeBag("smith", "acme", {short_one}, {"/business/person/company"}),
      MakeBag("acme", "jones", {other}, {"NA"})};
  const RepresentativeSet reps = SelectRepresentatives(training, schema);
  const bool picked = reps.entries.size() == 1 && !reps.entries[0].empty &&
                      reps.entries[0].sentence_id == "short";
  return {truncated && picked,
          std::string("truncation ") + (truncated ? "keeps the first 10" : "wrong") +
              ", representative " + (picked ? "is the shorter candidate" : "wrong")};
}

}  // namespace
}  // namespace dsre

int main(int argc, char **argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <dsre-cli> [--only 1,2,...]\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  std::set<int> only;
  if (argc >= 4 && std::string(argv[2]) == "--only") {
    for (const auto &piece : dsre::SplitString(argv[3], ',')) only.insert(std::stoi(piece));
  }

  const std::vector<std::pair<std::string, std::function<dsre::Outcome()>>> criteria = {
      {"gradient fidelity", dsre::GradientFidelity},
      {"attention normalization", dsre::AttentionNormalization},
      {"coupling algebra", dsre::CouplingAlgebra},
      {"synthetic learnability", dsre::SyntheticLearnability},
      {"attention selects evidence", dsre::AttentionSelectsEvidence},
      {"coupling helps under noise", dsre::CouplingHelpsUnderNoise},
      {"PR oracle equivalence", dsre::PrOracle},
      {"determinism", [&] { return dsre::Determinism(cli); }},
      {"capacity and initialization rules", dsre::CapacityAndRepresentatives},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(number)) continue;
    dsre::Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception &e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failures;
    std::printf("%s %d %s: %s\n", out.pass ? "PASS" : "FAIL", number, criteria[i].first.c_str(),
                out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
