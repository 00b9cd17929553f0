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

#include "dsre/config.h"

#include <charconv>
#include <sstream>

#include "dsre/errors.h"
#include "dsre/io.h"

namespace dsre {
namespace {

int ToInt(std::string_view key, std::string_view value) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error("key '" + std::string(key) + "' expects an integer, got '" + std::string(value) + "'");
  }
  return out;
}

std::uint64_t ToUint(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error("key '" + std::string(key) + "' expects an unsigned integer, got '" +
                std::string(value) + "'");
  }
  return out;
}

double ToDouble(std::string_view key, std::string_view value) {
  std::string s(value);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw Error("key '" + std::string(key) + "' expects a number, got '" + s + "'");
  }
  return out;
}

std::string FormatDouble(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) throw Error("learning_rate must be positive");
  if (lambda_couple < 0.0) throw Error("lambda_couple must be non-negative");
  if (epochs < 0) throw Error("epochs must be non-negative");
  if (batch_bags < 1) throw Error("batch_bags must be at least 1");
  if (m_max < 1) throw Error("m_max must be at least 1");
  if (checkpoint_every < 0) throw Error("checkpoint_every must be non-negative");
  if (max_sentence_len < 1) throw Error("max_sentence_len must be positive");
  model.Validate();
}

void SetConfigValue(TrainConfig &c, std::string_view key, std::string_view value) {
  if (key == "learning_rate") {
    c.learning_rate = ToDouble(key, value);
  } else if (key == "epochs") {
    c.epochs = ToInt(key, value);
  } else if (key == "batch_bags") {
    c.batch_bags = ToInt(key, value);
  } else if (key == "lambda_couple") {
    c.lambda_couple = ToDouble(key, value);
  } else if (key == "m_max") {
    c.m_max = ToInt(key, value);
  } else if (key == "seed") {
    c.seed = ToUint(key, value);
  } else if (key == "checkpoint_every") {
    c.checkpoint_every = ToInt(key, value);
  } else if (key == "max_sentence_len") {
    c.max_sentence_len = ToInt(key, value);
  } else if (key == "corpus") {
    c.corpus = value;
  } else if (key == "schema") {
    c.schema = value;
  } else if (key == "embeddings") {
    c.embeddings = value;
  } else if (key == "output_dir") {
    c.output_dir = value;
  } else if (key == "dev_corpus") {
    c.dev_corpus = value;
  } else if (key == "dev_gold") {
    c.dev_gold = value;
  } else if (key == "hops") {
    c.model.memory.hops = ToInt(key, value);
  } else if (key == "memory_capacity") {
    c.model.memory.memory_capacity = ToInt(key, value);
  } else if (key == "latent_dim") {
    c.model.memory.latent_dim = ToInt(key, value);
  } else if (key == "d_word") {
    c.model.encoder.d_word = ToInt(key, value);
  } else if (key == "d_pos_tag") {
    c.model.encoder.d_pos_tag = ToInt(key, value);
  } else if (key == "d_position") {
    c.model.encoder.d_position = ToInt(key, value);
  } else if (key == "feature_maps_per_width") {
    c.model.encoder.feature_maps_per_width = ToInt(key, value);
  } else if (key == "filter_widths") {
    c.model.encoder.filter_widths.clear();
    for (const auto &part : SplitString(value, ',')) {
      c.model.encoder.filter_widths.push_back(ToInt(key, Trim(part)));
    }
  } else if (key == "activation") {
    if (value == "relu") {
      c.model.encoder.activation = Activation::kRelu;
    } else if (value == "tanh") {
      c.model.encoder.activation = Activation::kTanh;
    } else {
      throw Error("activation must be relu or tanh, got '" + std::string(value) + "'");
    }
  } else {
    throw Error("unknown config key '" + std::string(key) + "'");
  }
}

TrainConfig ParseTrainConfig(std::string_view text, const std::string &source) {
  TrainConfig config;
  int line_no = 0;
  for (const std::string &raw : SplitString(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected key = value");
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));
    try {
      SetConfigValue(config, key, value);
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return config;
}

TrainConfig LoadTrainConfig(const std::string &path) {
  return ParseTrainConfig(ReadFile(path), path);
}

std::string SerializeTrainConfig(const TrainConfig &c) {
  std::ostringstream out;
  out << "learning_rate = " << FormatDouble(c.learning_rate) << "\n";
  out << "epochs = " << c.epochs << "\n";
  out << "batch_bags = " << c.batch_bags << "\n";
  out << "lambda_couple = " << FormatDouble(c.lambda_couple) << "\n";
  out << "m_max = " << c.m_max << "\n";
  out << "seed = " << c.seed << "\n";
  out << "checkpoint_every = " << c.checkpoint_every << "\n";
  out << "max_sentence_len = " << c.max_sentence_len << "\n";
  out << "hops = " << c.model.memory.hops << "\n";
  out << "memory_capacity = " << c.model.memory.memory_capacity << "\n";
  out << "latent_dim = " << c.model.memory.latent_dim << "\n";
  out << "d_word = " << c.model.encoder.d_word << "\n";
  out << "d_pos_tag = " << c.model.encoder.d_pos_tag << "\n";
  out << "d_position = " << c.model.encoder.d_position << "\n";
  out << "feature_maps_per_width = " << c.model.encoder.feature_maps_per_width << "\n";
  out << "filter_widths = ";
  for (std::size_t i = 0; i < c.model.encoder.filter_widths.size(); ++i) {
    out << (i ? "," : "") << c.model.encoder.filter_widths[i];
  }
  out << "\n";
  out << "activation = " << (c.model.encoder.activation == Activation::kRelu ? "relu" : "tanh")
      << "\n";
  for (const auto &[key, value] :
       {std::pair<const char *, const std::string &>{"corpus", c.corpus},
        {"schema", c.schema},
        {"embeddings", c.embeddings},
        {"output_dir", c.output_dir},
        {"dev_corpus", c.dev_corpus},
        {"dev_gold", c.dev_gold}}) {
    if (!value.empty()) out << key << " = " << value << "\n";
  }
  return out.str();
}

}  // namespace dsre
