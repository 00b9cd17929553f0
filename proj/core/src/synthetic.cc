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

#include "dsre/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>

#include "dsre/errors.h"
#include "dsre/io.h"

namespace dsre {
namespace {

struct Word {
  const char *text;
  const char *pos;
};

constexpr Word kLeadIns[] = {{"the", "DT"},     {"a", "DT"},      {"report", "NN"},
                             {"yesterday", "NN"}, {"officials", "NNS"}, {"local", "JJ"},
                             {"sources", "NNS"}, {"recently", "RB"}};
constexpr Word kJoiners[] = {{",", ","}, {"also", "RB"}, {"reportedly", "RB"}, {"then", "RB"}};
constexpr Word kLinks[] = {{"with", "IN"}, {"the", "DT"}, {"to", "TO"}, {"for", "IN"}};
constexpr Word kTails[] = {{"in", "IN"},     {"last", "JJ"},   {"year", "NN"},
                           {"according", "VBG"}, {"to", "TO"},  {"sources", "NNS"},
                           {"on", "IN"},     {"monday", "NNP"}, {".", "."}};

std::string Letters(int n) {
  std::string s;
  do {
    s.insert(s.begin(), static_cast<char>('a' + n % 26));
    n /= 26;
  } while (n > 0);
  return s;
}

std::string EvidenceVerb(int relation, int j) { return "vb" + Letters(relation) + Letters(j); }
std::string NoiseVerb(int j) { return "nv" + Letters(j); }
std::string EntityName(int type, int k) { return "ent" + Letters(type) + std::to_string(k); }

class VectorMaker {
 public:
  VectorMaker(int dim, std::mt19937_64 &rng) : dim_(dim), rng_(rng) {}

  std::vector<double> Unit() {
    std::vector<double> v(dim_);
    double norm = 0.0;
    for (double &x : v) {
      x = gauss_(rng_);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (double &x : v) x /= norm;
    return v;
  }

  // Unit vector near `center`; `spread` is the relative weight of the noise.
  std::vector<double> Near(const std::vector<double> &center, double spread) {
    auto noise = Unit();
    std::vector<double> v(dim_);
    double norm = 0.0;
    for (int i = 0; i < dim_; ++i) {
      v[i] = center[i] + spread * noise[i];
      norm += v[i] * v[i];
    }
    norm = std::sqrt(norm);
    for (double &x : v) x /= norm;
    return v;
  }

 private:
  int dim_;
  std::mt19937_64 &rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

template <std::size_t N>
Token Pick(const Word (&words)[N], std::mt19937_64 &rng) {
  std::uniform_int_distribution<std::size_t> d(0, N - 1);
  const Word &w = words[d(rng)];
  return Token{w.text, w.pos};
}

void AppendVector(std::string &out, const std::string &token, const std::vector<double> &v,
                  double scale) {
  out += token;
  char buf[32];
  for (double x : v) {
    std::snprintf(buf, sizeof(buf), " %.6f", x * scale);
    out += buf;
  }
  out += "\n";
}

}  // namespace

void SyntheticConfig::Validate() const {
  if (!(noise_rate >= 0.0 && noise_rate < 1.0)) throw Error("noise_rate must be in [0, 1)");
  if (num_relations < 1) throw Error("num_relations must be positive");
  if (bags_per_relation < 1) throw Error("bags_per_relation must be positive");
  if (bag_size < 1) throw Error("bag_size must be positive");
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) throw Error("test_fraction must be in [0, 1)");
  if (embedding_dim < 2) throw Error("embedding_dim must be at least 2");
  if (verbs_per_relation < 1 || noise_verbs < 1) throw Error("verb lexicons must be non-empty");
  if (entity_types < 1 || entities_per_type < 1) throw Error("entity pools must be non-empty");
}

SyntheticCorpus GenerateSynthetic(const SyntheticConfig &config) {
  config.Validate();
  std::mt19937_64 rng(config.seed);
  VectorMaker vectors(config.embedding_dim, rng);
  constexpr double kScale = 2.5;

  SyntheticCorpus out;
  std::vector<std::string> ids{std::string(kNaRelation)};
  for (int r = 0; r < config.num_relations; ++r) {
    ids.push_back("/synth/rel" + Letters(r) + "/" + EvidenceVerb(r, 0));
  }
  out.schema = RelationSchema(ids);

  // Static vectors: relation verbs cluster around a per-relation centre,
  // entities around a per-type centre; everything else is unrelated.
  std::string emb;
  for (int r = 0; r < config.num_relations; ++r) {
    const auto center = vectors.Unit();
    for (int j = 0; j < config.verbs_per_relation; ++j) {
      AppendVector(emb, EvidenceVerb(r, j), vectors.Near(center, 0.6), kScale);
    }
  }
  for (int j = 0; j < config.noise_verbs; ++j) AppendVector(emb, NoiseVerb(j), vectors.Unit(), kScale);
  for (int t = 0; t < config.entity_types; ++t) {
    const auto center = vectors.Unit();
    for (int k = 0; k < config.entities_per_type; ++k) {
      AppendVector(emb, EntityName(t, k), vectors.Near(center, 0.8), kScale);
    }
  }
  std::set<std::string> fillers;
  for (const Word &w : kLeadIns) fillers.insert(w.text);
  for (const Word &w : kJoiners) fillers.insert(w.text);
  for (const Word &w : kLinks) fillers.insert(w.text);
  for (const Word &w : kTails) fillers.insert(w.text);
  for (const auto &f : fillers) AppendVector(emb, f, vectors.Unit(), kScale);
  out.embeddings_text = std::move(emb);
  out.embeddings = StaticEmbeddings::Parse(out.embeddings_text, "synthetic-embeddings");

  std::bernoulli_distribution is_noise(config.noise_rate);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution swap_order(0.25);
  std::uniform_int_distribution<int> evidence_verb(0, config.verbs_per_relation - 1);
  std::uniform_int_distribution<int> noise_verb(0, config.noise_verbs - 1);
  std::uniform_int_distribution<int> entity(0, config.entities_per_type - 1);
  std::uniform_int_distribution<int> lead_len(0, 2);
  std::uniform_int_distribution<int> tail_len(0, 3);

  const int test_start = static_cast<int>(
      std::lround(config.bags_per_relation * (1.0 - config.test_fraction)));
  std::set<PairId> used_pairs;
  int bag_counter = 0;
  for (int r = 0; r < config.num_relations; ++r) {
    const int head_type = r % config.entity_types;
    const int tail_type = (3 * r + 1) % config.entity_types;
    for (int b = 0; b < config.bags_per_relation; ++b) {
      InstanceBag bag;
      do {
        bag.pair = PairId{EntityName(head_type, entity(rng)), EntityName(tail_type, entity(rng))};
      } while (used_pairs.count(bag.pair) > 0 && used_pairs.size() < 1000000);
      used_pairs.insert(bag.pair);
      bag.relations = {out.schema.name(r + 1)};

      for (int i = 0; i < config.bag_size; ++i) {
        Instance inst;
        inst.sentence_id = "s" + std::to_string(bag_counter) + "-" + std::to_string(i);
        const bool noise = is_noise(rng);
        out.evidence[inst.sentence_id] = !noise;
        const std::string verb =
            noise ? NoiseVerb(noise_verb(rng)) : EvidenceVerb(r, evidence_verb(rng));
        const bool e2_first = swap_order(rng);

        auto &toks = inst.tokens;
        for (int k = lead_len(rng); k > 0; --k) toks.push_back(Pick(kLeadIns, rng));
        const int first_at = static_cast<int>(toks.size());
        toks.push_back(Token{e2_first ? bag.pair.e2 : bag.pair.e1, "NNP"});
        if (coin(rng)) toks.push_back(Pick(kJoiners, rng));
        toks.push_back(Token{verb, "VBD"});
        if (coin(rng)) toks.push_back(Pick(kLinks, rng));
        const int second_at = static_cast<int>(toks.size());
        toks.push_back(Token{e2_first ? bag.pair.e1 : bag.pair.e2, "NNP"});
        for (int k = tail_len(rng); k > 0; --k) toks.push_back(Pick(kTails, rng));

        const Span first{first_at, first_at + 1};
        const Span second{second_at, second_at + 1};
        inst.e1 = e2_first ? second : first;
        inst.e2 = e2_first ? first : second;
        inst.verb_span = ExtractVerbSpan(inst);
        bag.instances.push_back(std::move(inst));
      }
      ++bag_counter;
      if (b >= test_start) {
        for (const auto &rel : bag.relations) out.test_gold.emplace(bag.pair, rel);
        out.test.push_back(std::move(bag));
      } else {
        out.train.push_back(std::move(bag));
      }
    }
  }
  auto by_pair = [](const InstanceBag &a, const InstanceBag &b) { return a.pair < b.pair; };
  std::sort(out.train.begin(), out.train.end(), by_pair);
  std::sort(out.test.begin(), out.test.end(), by_pair);
  return out;
}

std::string SerializeSidecar(const std::map<std::string, bool> &evidence) {
  std::string out;
  for (const auto &[id, is_evidence] : evidence) {
    out += id + "\t" + (is_evidence ? "evidence" : "noise") + "\n";
  }
  return out;
}

std::map<std::string, bool> LoadSidecar(const std::string &path) {
  std::map<std::string, bool> out;
  int line_no = 0;
  for (const auto &line : ReadLines(path)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitString(line, '\t');
    if (fields.size() != 2 || (fields[1] != "evidence" && fields[1] != "noise")) {
      throw ParseError(path, line_no, "expected sentence_id<TAB>evidence|noise");
    }
    out[fields[0]] = fields[1] == "evidence";
  }
  return out;
}

void WriteSynthetic(const SyntheticCorpus &corpus, const std::string &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw FileError(dir, "cannot create directory");
  const std::filesystem::path root(dir);
  WriteCorpus((root / "train.jsonl").string(), corpus.train);
  WriteCorpus((root / "test.jsonl").string(), corpus.test);
  WriteFileAtomic((root / "schema.txt").string(), corpus.schema.Serialize());
  WriteFileAtomic((root / "sidecar.tsv").string(), SerializeSidecar(corpus.evidence));
  std::string gold;
  for (const auto &[pair, rel] : corpus.test_gold) gold += pair.e1 + "\t" + pair.e2 + "\t" + rel + "\n";
  WriteFileAtomic((root / "gold.tsv").string(), gold);
  WriteFileAtomic((root / "embeddings.txt").string(), corpus.embeddings_text);
}

}  // namespace dsre
