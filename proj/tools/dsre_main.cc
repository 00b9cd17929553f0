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

// Command-line entry point:
//
//   dsre gen-synthetic --out DIR [--seed N] [--noise-rate R] ...
//   dsre train --config FILE [--corpus F] [--schema F] [--embeddings F]
//              [--out DIR] [--seed N] [--epochs N] [--lambda-couple X]
//   dsre evaluate --checkpoint F --corpus F --gold F --out pr.csv
//   dsre inspect-attention --checkpoint F --corpus F --out attention.tsv
//   dsre gradcheck [--seed N]
//
// Exit codes: 0 success, 1 usage or other failure, 2 missing or malformed
// input, 3 non-finite training loss.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dsre/checkpoint.h"
#include "dsre/config.h"
#include "dsre/errors.h"
#include "dsre/eval.h"
#include "dsre/gradcheck.h"
#include "dsre/io.h"
#include "dsre/synthetic.h"
#include "dsre/trainer.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitNonFinite = 3;

std::string Format(const char *fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

dsre::StaticEmbeddings EmbeddingsFor(const dsre::Checkpoint &ckpt, const std::string &flag) {
  const std::string path = flag.empty() ? ckpt.config.embeddings : flag;
  if (path.empty()) throw dsre::Error("no embeddings path: pass --embeddings");
  return dsre::StaticEmbeddings::Load(path);
}

std::vector<dsre::InstanceBag> LoadEvalCorpus(const std::string &path) {
  // Capacity is applied by the scorer so it can warn about truncation.
  return dsre::LoadCorpus(path, dsre::CorpusOptions{0, 100});
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Distant-supervision relation extraction with memory-network attention "
               "and coupling regularisation"};
  app.require_subcommand(1);

  struct {
    std::string config, corpus, schema, embeddings, gold, checkpoint, out;
    std::optional<std::uint64_t> seed;
    std::optional<int> epochs;
    std::optional<double> lambda_couple;
    double noise_rate = 0.0;
    int relations = 8, bags_per_relation = 50, bag_size = 4, threads = 1, coords = 24;
    int embedding_dim = 300;
    double test_fraction = 0.2;
  } f;

  auto *gen = app.add_subcommand("gen-synthetic", "Generate a synthetic corpus with evidence flags");
  gen->add_option("--out", f.out, "Output directory")->required();
  gen->add_option("--seed", f.seed, "Random seed (default 13)");
  gen->add_option("--noise-rate", f.noise_rate, "Probability that an instance is noise");
  gen->add_option("--relations", f.relations, "Number of non-NA relations");
  gen->add_option("--bags-per-relation", f.bags_per_relation, "Bags per relation");
  gen->add_option("--bag-size", f.bag_size, "Instances per bag");
  gen->add_option("--test-fraction", f.test_fraction, "Held-out share of each relation's bags");
  gen->add_option("--embedding-dim", f.embedding_dim, "Static vector dimension");

  auto *train = app.add_subcommand("train", "Train a model");
  train->add_option("--config", f.config, "key = value config file");
  train->add_option("--corpus", f.corpus, "Training corpus (JSON lines)");
  train->add_option("--schema", f.schema, "Relation schema");
  train->add_option("--embeddings", f.embeddings, "Pretrained word vectors");
  train->add_option("--out", f.out, "Output directory");
  train->add_option("--seed", f.seed, "Random seed");
  train->add_option("--epochs", f.epochs, "Number of epochs");
  train->add_option("--lambda-couple", f.lambda_couple, "Coupling loss weight");

  auto *evaluate = app.add_subcommand("evaluate", "Held-out precision/recall evaluation");
  evaluate->add_option("--checkpoint", f.checkpoint, "Checkpoint file")->required();
  evaluate->add_option("--corpus", f.corpus, "Test corpus")->required();
  evaluate->add_option("--gold", f.gold, "Gold facts (e1<TAB>e2<TAB>relation)")->required();
  evaluate->add_option("--out", f.out, "PR curve CSV")->required();
  evaluate->add_option("--embeddings", f.embeddings, "Override the checkpoint's vectors");
  evaluate->add_option("--threads", f.threads, "Scoring threads");

  auto *inspect = app.add_subcommand("inspect-attention", "Per-hop attention report");
  inspect->add_option("--checkpoint", f.checkpoint, "Checkpoint file")->required();
  inspect->add_option("--corpus", f.corpus, "Corpus to inspect")->required();
  inspect->add_option("--out", f.out, "Attention TSV (table goes to <out>.txt)")->required();
  inspect->add_option("--embeddings", f.embeddings, "Override the checkpoint's vectors");

  auto *gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of the full loss");
  gradcheck->add_option("--seed", f.seed, "Random seed (default 7)");
  gradcheck->add_option("--coords", f.coords, "Coordinates probed per tensor");

  if (argc <= 1) {
    std::cout << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      dsre::SyntheticConfig sc;
      sc.noise_rate = f.noise_rate;
      sc.num_relations = f.relations;
      sc.bags_per_relation = f.bags_per_relation;
      sc.bag_size = f.bag_size;
      sc.test_fraction = f.test_fraction;
      sc.embedding_dim = f.embedding_dim;
      if (f.seed) sc.seed = *f.seed;
      const auto corpus = dsre::GenerateSynthetic(sc);
      dsre::WriteSynthetic(corpus, f.out);
      std::cout << "wrote " << corpus.train.size() << " training and " << corpus.test.size()
                << " test bags to " << f.out << "\n";
    } else if (train->parsed()) {
      dsre::TrainConfig config;
      if (!f.config.empty()) config = dsre::LoadTrainConfig(f.config);
      if (!f.corpus.empty()) config.corpus = f.corpus;
      if (!f.schema.empty()) config.schema = f.schema;
      if (!f.embeddings.empty()) config.embeddings = f.embeddings;
      if (!f.out.empty()) config.output_dir = f.out;
      if (f.seed) config.seed = *f.seed;
      if (f.epochs) config.epochs = *f.epochs;
      if (f.lambda_couple) config.lambda_couple = *f.lambda_couple;
      const auto result = dsre::Train(config);
      for (const auto &m : result.metrics) {
        std::cout << "epoch " << m.epoch << " train_loss=" << Format("%.6f", m.train_loss);
        if (m.dev_auc_pr) std::cout << " dev_auc_pr=" << Format("%.4f", *m.dev_auc_pr);
        std::cout << "\n";
      }
      std::cout << "checkpoint " << result.final_checkpoint << "\n";
    } else if (evaluate->parsed()) {
      const auto ckpt = dsre::LoadCheckpoint(f.checkpoint);
      const auto embeddings = EmbeddingsFor(ckpt, f.embeddings);
      const auto bags = LoadEvalCorpus(f.corpus);
      const auto gold = dsre::LoadGoldFacts(f.gold);
      const auto curve = dsre::ComputePrCurve(
          dsre::ScoreCorpus(ckpt.model, bags, embeddings, f.threads), gold);
      dsre::WriteFileAtomic(f.out, dsre::FormatPrCsv(curve));
      std::cout << "auc_pr=" << Format("%.9g", curve.auc) << "\n";
    } else if (inspect->parsed()) {
      const auto ckpt = dsre::LoadCheckpoint(f.checkpoint);
      const auto embeddings = EmbeddingsFor(ckpt, f.embeddings);
      const auto bags = LoadEvalCorpus(f.corpus);
      const auto traces = dsre::TraceCorpus(ckpt.model, bags, embeddings);
      const std::string table = dsre::FormatAttentionTable(bags, traces);
      dsre::WriteFileAtomic(f.out, dsre::FormatAttentionTsv(traces));
      dsre::WriteFileAtomic(f.out + ".txt", table);
      std::cout << table;
    } else if (gradcheck->parsed()) {
      dsre::GradCheckOptions options;
      if (f.seed) options.seed = *f.seed;
      options.coords_per_tensor = f.coords;
      const auto result = dsre::RunGradCheck(options);
      std::cout << "max_rel_err=" << Format("%.3e", result.max_relative_error)
                << " worst=" << result.worst_tensor << "[" << result.worst_index << "]"
                << " checked=" << result.coordinates_checked
                << " seconds=" << Format("%.2f", result.seconds) << "\n";
      return result.max_relative_error < 1e-4 ? 0 : kExitUsage;
    }
  } catch (const dsre::FileError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const dsre::ParseError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const dsre::NonFiniteLossError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonFinite;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
