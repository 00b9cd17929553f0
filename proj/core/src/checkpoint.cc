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

#include "dsre/checkpoint.h"

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>

#include "dsre/errors.h"
#include "dsre/io.h"

namespace dsre {
namespace {

constexpr std::string_view kMagic = "DSRECKPT 1";

void AppendSection(std::string &out, std::string_view name, std::string_view body) {
  out += "section ";
  out += name;
  out += " " + std::to_string(body.size()) + "\n";
  out += body;
  out += "\n";
}

std::string JoinLines(const std::vector<std::string> &items) {
  std::string out;
  for (const auto &s : items) out += s + "\n";
  return out;
}

std::string SerializeRepresentatives(const RepresentativeSet &reps) {
  std::string out;
  for (const Representative &r : reps.entries) {
    out += r.relation + "\t" + r.sentence_id + "\t" + (r.empty ? "1" : "0");
    for (const auto &t : r.tokens) out += "\t" + t;
    out += "\n";
  }
  return out;
}

void AppendFloat(std::string &out, double v) {
  const std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
  for (int b = 0; b < 4; ++b) out += static_cast<char>((bits >> (8 * b)) & 0xff);
}

double ReadFloat(std::string_view data, std::size_t offset) {
  std::uint32_t bits = 0;
  for (int b = 0; b < 4; ++b) {
    bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[offset + b])) << (8 * b);
  }
  return static_cast<double>(std::bit_cast<float>(bits));
}

// Sequential reader over the checkpoint bytes.
class Reader {
 public:
  Reader(std::string_view bytes, const std::string &source) : bytes_(bytes), source_(source) {}

  std::string Line() {
    const auto end = bytes_.find('\n', pos_);
    if (end == std::string_view::npos) Fail("truncated header");
    std::string line(bytes_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return line;
  }

  std::string_view Take(std::size_t n) {
    if (pos_ + n > bytes_.size()) Fail("truncated payload");
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  [[noreturn]] void Fail(const std::string &what) const { throw ParseError(source_, 0, what); }

 private:
  std::string_view bytes_;
  const std::string &source_;
  std::size_t pos_ = 0;
};

std::vector<std::string> Lines(std::string_view body) {
  std::vector<std::string> out;
  for (auto &line : SplitString(body, '\n')) {
    if (!line.empty()) out.push_back(std::move(line));
  }
  return out;
}

// Every line is kept, including empty tokens; only the final newline is
// dropped.
std::vector<std::string> VocabLines(std::string_view body) {
  auto out = SplitString(body, '\n');
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

}  // namespace

std::string SerializeCheckpoint(const Model &model, const TrainConfig &config) {
  std::string out(kMagic);
  out += "\n";
  AppendSection(out, "config", SerializeTrainConfig(config));
  AppendSection(out, "schema", model.schema.Serialize());
  AppendSection(out, "words", JoinLines(model.words.tokens()));
  AppendSection(out, "pos_tags", JoinLines(model.pos_tags.tokens()));
  AppendSection(out, "representatives", SerializeRepresentatives(model.representatives));

  const auto named = model.params.Named();
  out += "tensors " + std::to_string(named.size()) + "\n";
  std::size_t offset = 0;
  for (const auto &[name, t] : named) {
    out += name + " " + std::to_string(t->rank());
    for (int d : t->shape()) out += " " + std::to_string(d);
    out += " " + std::to_string(offset) + "\n";
    offset += t->size() * 4;
  }
  out += "data " + std::to_string(offset) + "\n";
  for (const auto &[_, t] : named) {
    for (double v : t->data()) AppendFloat(out, v);
  }
  return out;
}

void SaveCheckpoint(const std::string &path, const Model &model, const TrainConfig &config) {
  WriteFileAtomic(path, SerializeCheckpoint(model, config));
}

Checkpoint ParseCheckpoint(std::string_view bytes, const std::string &source) {
  Reader in(bytes, source);
  if (in.Line() != kMagic) in.Fail("not a checkpoint file");

  std::map<std::string, std::string> sections;
  std::string line = in.Line();
  while (line.rfind("section ", 0) == 0) {
    std::istringstream head(line.substr(8));
    std::string name;
    std::size_t size = 0;
    if (!(head >> name >> size)) in.Fail("bad section header: " + line);
    sections[name] = std::string(in.Take(size));
    in.Take(1);
    line = in.Line();
  }
  for (const char *required : {"config", "schema", "words", "pos_tags", "representatives"}) {
    if (!sections.count(required)) in.Fail(std::string("missing section ") + required);
  }

  Checkpoint ckpt;
  ckpt.config = ParseTrainConfig(sections["config"], source + ":config");
  Model &model = ckpt.model;
  model.config = ckpt.config.model;
  model.schema = RelationSchema(Lines(sections["schema"]));
  const auto words = VocabLines(sections["words"]);
  const auto tags = VocabLines(sections["pos_tags"]);
  if (words.empty() || tags.empty()) in.Fail("empty vocabulary");
  model.words = Vocabulary(std::vector<std::string>(words.begin() + 1, words.end()));
  model.pos_tags = Vocabulary(std::vector<std::string>(tags.begin() + 1, tags.end()));
  for (const auto &rep_line : Lines(sections["representatives"])) {
    const auto fields = SplitString(rep_line, '\t');
    if (fields.size() < 3) in.Fail("bad representative line: " + rep_line);
    Representative rep;
    rep.relation = fields[0];
    rep.sentence_id = fields[1];
    rep.empty = fields[2] == "1";
    rep.tokens.assign(fields.begin() + 3, fields.end());
    model.representatives.entries.push_back(std::move(rep));
  }

  std::istringstream count_line(line);
  std::string keyword;
  std::size_t count = 0;
  if (!(count_line >> keyword >> count) || keyword != "tensors") in.Fail("missing tensor manifest");
  struct Entry {
    Shape shape;
    std::size_t offset;
  };
  std::map<std::string, Entry> manifest;
  for (std::size_t i = 0; i < count; ++i) {
    std::istringstream entry(in.Line());
    std::string name;
    int rank = 0;
    if (!(entry >> name >> rank) || rank < 1) in.Fail("bad manifest entry");
    Entry e;
    e.shape.resize(rank);
    for (int &d : e.shape) entry >> d;
    if (!(entry >> e.offset)) in.Fail("bad manifest entry for " + name);
    manifest[name] = e;
  }
  std::istringstream data_line(in.Line());
  std::size_t data_size = 0;
  if (!(data_line >> keyword >> data_size) || keyword != "data") in.Fail("missing data block");
  const std::string_view data = in.Take(data_size);

  for (int width : model.config.encoder.filter_widths) {
    ConvFilter f;
    f.width = width;
    model.params.encoder.filters.push_back(std::move(f));
  }
  for (auto &[name, slot] : model.params.Named()) {
    auto it = manifest.find(name);
    if (it == manifest.end()) in.Fail("checkpoint has no tensor " + name);
    Tensor t(it->second.shape);
    if (it->second.offset + t.size() * 4 > data.size()) in.Fail("tensor " + name + " out of range");
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = ReadFloat(data, it->second.offset + 4 * k);
    *slot = std::move(t);
  }
  const auto &p = model.params;
  if (p.encoder.word_table.rows() != model.words.size() ||
      p.encoder.pos_table.rows() != model.pos_tags.size() ||
      p.memory.relation_weight.rows() != model.schema.size()) {
    in.Fail("tensor shapes do not match vocabularies or schema");
  }
  return ckpt;
}

Checkpoint LoadCheckpoint(const std::string &path) {
  return ParseCheckpoint(ReadFile(path), path);
}

}  // namespace dsre
