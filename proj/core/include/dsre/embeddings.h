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

#ifndef DSRE_EMBEDDINGS_H_
#define DSRE_EMBEDDINGS_H_

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dsre {

// Frozen pretrained word vectors. Never placed on a gradient tape; the object
// is immutable once constructed.
class StaticEmbeddings {
 public:
  StaticEmbeddings() = default;

  // Whitespace-separated text: a token followed by `dim` reals per line.
  // `expected_dim` of 0 accepts the dimension of the first line.
  static StaticEmbeddings Load(const std::string &path, int expected_dim = 0);
  static StaticEmbeddings Parse(std::string_view text, const std::string &source,
                                int expected_dim = 0);
  static StaticEmbeddings FromVectors(
      int dim, const std::vector<std::pair<std::string, std::vector<double>>> &vectors);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(index_.size()); }
  bool Contains(std::string_view token) const;
  // Empty span for unknown tokens.
  std::span<const double> Lookup(std::string_view token) const;
  // Mean over the known tokens; the zero vector when none are known.
  std::vector<double> MeanVector(std::span<const std::string> tokens) const;

  // Raw storage, for byte-level immutability checks.
  std::span<const double> storage() const { return values_; }

 private:
  void Insert(const std::string &token, std::span<const double> values);

  int dim_ = 0;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Cosine similarity; 0 when either vector has zero norm.
double Cosine(std::span<const double> a, std::span<const double> b);

}  // namespace dsre

#endif  // DSRE_EMBEDDINGS_H_
