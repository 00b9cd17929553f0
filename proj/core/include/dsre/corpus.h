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

#ifndef DSRE_CORPUS_H_
#define DSRE_CORPUS_H_

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dsre {

// Half-open token range [begin, end).
struct Span {
  int begin = 0;
  int end = 0;

  int length() const { return end - begin; }
  bool contains(int t) const { return t >= begin && t < end; }
  friend bool operator==(const Span &, const Span &) = default;
};

struct Token {
  std::string text;  // lowercased surface form
  std::string pos;
  friend bool operator==(const Token &, const Token &) = default;
};

// One sentence mentioning an entity pair.
struct Instance {
  std::string sentence_id;
  std::vector<Token> tokens;
  Span e1;
  Span e2;
  std::optional<Span> verb_span;

  std::string Text() const;
  friend bool operator==(const Instance &, const Instance &) = default;
};

struct PairId {
  std::string e1;
  std::string e2;

  // "e1|e2", used in reports and error messages.
  std::string ToString() const { return e1 + "|" + e2; }
  friend auto operator<=>(const PairId &, const PairId &) = default;
  friend bool operator==(const PairId &, const PairId &) = default;
};

// All instances for one entity pair. `relations` is sorted and unique; an
// empty set means NA.
struct InstanceBag {
  PairId pair;
  std::vector<Instance> instances;
  std::vector<std::string> relations;

  friend bool operator==(const InstanceBag &, const InstanceBag &) = default;
};

inline constexpr std::string_view kNaRelation = "NA";

// Known (entity pair, relation) facts; NA never appears.
using GoldFacts = std::set<std::pair<PairId, std::string>>;

// Ordered relation ids; index 0 is always NA.
class RelationSchema {
 public:
  RelationSchema() : ids_{std::string(kNaRelation)} {}
  // `ids` must start with "NA" and be unique.
  explicit RelationSchema(std::vector<std::string> ids);

  static RelationSchema Load(const std::string &path);
  std::string Serialize() const;

  int size() const { return static_cast<int>(ids_.size()); }
  const std::string &name(int index) const { return ids_.at(index); }
  const std::vector<std::string> &ids() const { return ids_; }
  std::optional<int> Find(std::string_view id) const;
  // Throws Error for unknown ids.
  int IndexOf(std::string_view id) const;

 private:
  std::vector<std::string> ids_;
};

struct CorpusOptions {
  // 0 disables truncation.
  int memory_capacity = 10;
  int max_sentence_len = 100;
};

// Parses line-delimited JSON. Bags are sorted by pair id; instances keep file
// order. Verb spans are filled in by ExtractVerbSpan.
std::vector<InstanceBag> ParseCorpus(std::string_view text, const std::string &source,
                                     const CorpusOptions &options = {});
std::vector<InstanceBag> LoadCorpus(const std::string &path,
                                    const CorpusOptions &options = {});

std::string SerializeCorpus(const std::vector<InstanceBag> &bags);
void WriteCorpus(const std::string &path, const std::vector<InstanceBag> &bags);

// Keeps the first `capacity` instances of every bag.
void TruncateBags(std::vector<InstanceBag> &bags, int capacity);

std::size_t CountInstances(const std::vector<InstanceBag> &bags);

// Longest run of verb-tagged tokens strictly between the two entity mentions
// (leftmost on ties). Falls back to the whole gap when it has no verb; absent
// when the mentions are adjacent.
std::optional<Span> ExtractVerbSpan(const Instance &instance);

// Tokens of both entity mentions, e1 first.
std::vector<std::string> EntityPhrase(const Instance &instance);
std::vector<std::string> VerbPhrase(const Instance &instance);

}  // namespace dsre

#endif  // DSRE_CORPUS_H_
