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

#ifndef DSRE_SYNTHETIC_H_
#define DSRE_SYNTHETIC_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dsre/corpus.h"
#include "dsre/embeddings.h"

namespace dsre {

// Generator for labelled toy corpora with known evidence. Every relation owns
// a verb lexicon whose static vectors cluster together; noise instances use a
// shared lexicon unrelated to any relation. Entity types are shared between
// pairs of relations.
struct SyntheticConfig {
  double noise_rate = 0.0;
  int num_relations = 8;
  int bags_per_relation = 50;
  int bag_size = 4;
  std::uint64_t seed = 13;
  double test_fraction = 0.2;
  int embedding_dim = 300;
  int verbs_per_relation = 6;
  int noise_verbs = 12;
  int entity_types = 4;
  int entities_per_type = 40;

  void Validate() const;
};

struct SyntheticCorpus {
  RelationSchema schema;
  std::vector<InstanceBag> train;
  std::vector<InstanceBag> test;
  std::map<std::string, bool> evidence;  // sentence id -> expresses its bag's relation
  std::string embeddings_text;
  StaticEmbeddings embeddings;  // parsed from embeddings_text
  GoldFacts test_gold;
};

SyntheticCorpus GenerateSynthetic(const SyntheticConfig &config);

// "sentence_id<TAB>evidence|noise" lines.
std::string SerializeSidecar(const std::map<std::string, bool> &evidence);
std::map<std::string, bool> LoadSidecar(const std::string &path);

// Writes train.jsonl, test.jsonl, schema.txt, sidecar.tsv, gold.tsv and
// embeddings.txt into `dir` (created if needed).
void WriteSynthetic(const SyntheticCorpus &corpus, const std::string &dir);

}  // namespace dsre

#endif  // DSRE_SYNTHETIC_H_
