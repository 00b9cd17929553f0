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

#ifndef DSRE_FEATURES_H_
#define DSRE_FEATURES_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dsre/corpus.h"

namespace dsre {

// String-to-id map with a reserved out-of-vocabulary entry at id 0.
class Vocabulary {
 public:
  static constexpr int kOovId = 0;
  static constexpr std::string_view kOovToken = "<unk>";

  Vocabulary();
  explicit Vocabulary(const std::vector<std::string> &tokens);

  // Word and POS vocabularies over a training corpus, ids in first-seen order.
  static Vocabulary Words(const std::vector<InstanceBag> &bags);
  static Vocabulary PosTags(const std::vector<InstanceBag> &bags);

  int Add(std::string_view token);
  int Lookup(std::string_view token) const;
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::string &token(int id) const { return tokens_.at(id); }
  const std::vector<std::string> &tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

inline constexpr int kMaxPositionOffset = 30;
inline constexpr int kPositionTableSize = 2 * kMaxPositionOffset + 1;

struct FeatureMatrix {
  std::vector<int> word_ids;
  std::vector<int> pos_ids;
  // Signed distance to the nearest token of each mention, clipped to
  // [-kMaxPositionOffset, kMaxPositionOffset]; 0 inside the mention.
  std::vector<int> pos1_offsets;
  std::vector<int> pos2_offsets;

  int length() const { return static_cast<int>(word_ids.size()); }
  friend bool operator==(const FeatureMatrix &, const FeatureMatrix &) = default;
};

int RelativeOffset(int token, const Span &mention);
// Row of the position table for a clipped offset.
inline int PositionIndex(int offset) { return offset + kMaxPositionOffset; }

FeatureMatrix Featurize(const Instance &instance, const Vocabulary &words,
                        const Vocabulary &pos_tags);

}  // namespace dsre

#endif  // DSRE_FEATURES_H_
