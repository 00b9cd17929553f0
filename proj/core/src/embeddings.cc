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

#include "dsre/embeddings.h"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "dsre/errors.h"
#include "dsre/io.h"

namespace dsre {

StaticEmbeddings StaticEmbeddings::Load(const std::string &path, int expected_dim) {
  return Parse(ReadFile(path), path, expected_dim);
}

StaticEmbeddings StaticEmbeddings::Parse(std::string_view text, const std::string &source,
                                         int expected_dim) {
  StaticEmbeddings emb;
  emb.dim_ = expected_dim;
  int line_no = 0;
  std::vector<double> values;
  for (const std::string &raw : SplitString(text, '\n')) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty()) continue;
    std::istringstream in{std::string(line)};
    std::string token;
    in >> token;
    values.clear();
    std::string field;
    while (in >> field) {
      char *end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (end == field.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw ParseError(source, line_no, "bad embedding value '" + field + "'");
      }
      values.push_back(v);
    }
    if (emb.dim_ == 0) emb.dim_ = static_cast<int>(values.size());
    if (values.empty() || static_cast<int>(values.size()) != emb.dim_) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(emb.dim_) + " values, got " +
                           std::to_string(values.size()));
    }
    if (emb.Contains(token)) continue;  // first occurrence wins
    emb.Insert(token, values);
  }
  return emb;
}

StaticEmbeddings StaticEmbeddings::FromVectors(
    int dim, const std::vector<std::pair<std::string, std::vector<double>>> &vectors) {
  StaticEmbeddings emb;
  emb.dim_ = dim;
  for (const auto &[token, values] : vectors) {
    if (static_cast<int>(values.size()) != dim) {
      throw ShapeError("embedding for '" + token + "' has " + std::to_string(values.size()) +
                       " values, expected " + std::to_string(dim));
    }
    if (!emb.Contains(token)) emb.Insert(token, values);
  }
  return emb;
}

void StaticEmbeddings::Insert(const std::string &token, std::span<const double> values) {
  index_.emplace(token, values_.size());
  values_.insert(values_.end(), values.begin(), values.end());
}

bool StaticEmbeddings::Contains(std::string_view token) const {
  return index_.find(std::string(token)) != index_.end();
}

std::span<const double> StaticEmbeddings::Lookup(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return {};
  return std::span<const double>(values_).subspan(it->second, dim_);
}

std::vector<double> StaticEmbeddings::MeanVector(std::span<const std::string> tokens) const {
  std::vector<double> mean(dim_, 0.0);
  int known = 0;
  for (const auto &t : tokens) {
    auto v = Lookup(t);
    if (v.empty()) continue;
    for (int i = 0; i < dim_; ++i) mean[i] += v[i];
    ++known;
  }
  if (known > 0) {
    for (double &x : mean) x /= known;
  }
  return mean;
}

double Cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeError("cosine: vectors of length " + std::to_string(a.size()) + " and " +
                     std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace dsre
