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

#include "dsre/features.h"

#include <algorithm>

namespace dsre {

Vocabulary::Vocabulary() { Add(kOovToken); }

Vocabulary::Vocabulary(const std::vector<std::string> &tokens) {
  Add(kOovToken);
  for (const auto &t : tokens) Add(t);
}

Vocabulary Vocabulary::Words(const std::vector<InstanceBag> &bags) {
  Vocabulary v;
  for (const auto &bag : bags) {
    for (const auto &inst : bag.instances) {
      for (const auto &tok : inst.tokens) v.Add(tok.text);
    }
  }
  return v;
}

Vocabulary Vocabulary::PosTags(const std::vector<InstanceBag> &bags) {
  Vocabulary v;
  for (const auto &bag : bags) {
    for (const auto &inst : bag.instances) {
      for (const auto &tok : inst.tokens) v.Add(tok.pos);
    }
  }
  return v;
}

int Vocabulary::Add(std::string_view token) {
  auto [it, inserted] = index_.try_emplace(std::string(token), size());
  if (inserted) tokens_.emplace_back(token);
  return it->second;
}

int Vocabulary::Lookup(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kOovId : it->second;
}

int RelativeOffset(int token, const Span &mention) {
  int offset = 0;
  if (token < mention.begin) {
    offset = token - mention.begin;
  } else if (token >= mention.end) {
    offset = token - (mention.end - 1);
  }
  return std::clamp(offset, -kMaxPositionOffset, kMaxPositionOffset);
}

FeatureMatrix Featurize(const Instance &instance, const Vocabulary &words,
                        const Vocabulary &pos_tags) {
  FeatureMatrix fm;
  const int n = static_cast<int>(instance.tokens.size());
  fm.word_ids.reserve(n);
  fm.pos_ids.reserve(n);
  fm.pos1_offsets.reserve(n);
  fm.pos2_offsets.reserve(n);
  for (int t = 0; t < n; ++t) {
    fm.word_ids.push_back(words.Lookup(instance.tokens[t].text));
    fm.pos_ids.push_back(pos_tags.Lookup(instance.tokens[t].pos));
    fm.pos1_offsets.push_back(RelativeOffset(t, instance.e1));
    fm.pos2_offsets.push_back(RelativeOffset(t, instance.e2));
  }
  return fm;
}

}  // namespace dsre
