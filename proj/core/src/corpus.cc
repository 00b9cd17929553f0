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

#include "dsre/corpus.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "dsre/errors.h"
#include "dsre/io.h"
#include "json.hpp"

namespace dsre {
namespace {

using json = nlohmann::json;

std::string Lowercase(std::string s) {
  for (char &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::optional<Span> ReadSpan(const json &entity) {
  const json &span = entity.at("span");
  if (!span.is_array() || span.size() != 2) return std::nullopt;
  return Span{span[0].get<int>(), span[1].get<int>()};
}

bool Overlaps(const Span &a, const Span &b) { return a.begin < b.end && b.begin < a.end; }

// Cuts sentences longer than `max_len` to a window centred on the midpoint
// between the two mentions.
void ClipLength(Instance &inst, int max_len, const std::string &source, int line) {
  const int n = static_cast<int>(inst.tokens.size());
  if (n <= max_len) return;
  const int lo_ent = std::min(inst.e1.begin, inst.e2.begin);
  const int hi_ent = std::max(inst.e1.end, inst.e2.end);
  const int mid = (lo_ent + hi_ent) / 2;
  const int lo = std::clamp(mid - max_len / 2, 0, n - max_len);
  const int hi = lo + max_len;
  if (lo_ent < lo || hi_ent > hi) {
    throw ParseError(source, line,
                     "sentence " + inst.sentence_id + ": entity mentions span more than " +
                         std::to_string(max_len) + " tokens");
  }
  inst.tokens = std::vector<Token>(inst.tokens.begin() + lo, inst.tokens.begin() + hi);
  inst.e1 = {inst.e1.begin - lo, inst.e1.end - lo};
  inst.e2 = {inst.e2.begin - lo, inst.e2.end - lo};
}

struct ParsedLine {
  PairId pair;
  Instance instance;
  std::vector<std::string> relations;
};

ParsedLine ParseLine(const std::string &text, const std::string &source, int line,
                     const CorpusOptions &options) {
  ParsedLine out;
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::exception &e) {
    throw ParseError(source, line, std::string("malformed JSON: ") + e.what());
  }
  try {
    Instance &inst = out.instance;
    inst.sentence_id = obj.at("sentence_id").get<std::string>();
    for (const json &tok : obj.at("tokens")) {
      inst.tokens.push_back(
          Token{Lowercase(tok.at("text").get<std::string>()), tok.at("pos").get<std::string>()});
    }
    const json &e1 = obj.at("e1");
    const json &e2 = obj.at("e2");
    out.pair = PairId{e1.at("id").get<std::string>(), e2.at("id").get<std::string>()};
    const auto s1 = ReadSpan(e1);
    const auto s2 = ReadSpan(e2);
    if (!s1 || !s2) {
      throw ParseError(source, line, "sentence " + inst.sentence_id + ": span must be [start, end)");
    }
    inst.e1 = *s1;
    inst.e2 = *s2;
    for (const json &rel : obj.at("relations")) out.relations.push_back(rel.get<std::string>());
  } catch (const json::exception &e) {
    throw ParseError(source, line, std::string("malformed instance: ") + e.what());
  }

  Instance &inst = out.instance;
  const int n = static_cast<int>(inst.tokens.size());
  if (n == 0) throw ParseError(source, line, "sentence " + inst.sentence_id + " has no tokens");
  for (const Span &s : {inst.e1, inst.e2}) {
    if (s.begin < 0 || s.end > n || s.begin >= s.end) {
      throw ParseError(source, line,
                       "sentence " + inst.sentence_id + ": entity span [" +
                           std::to_string(s.begin) + "," + std::to_string(s.end) +
                           ") out of bounds for " + std::to_string(n) + " tokens");
    }
  }
  if (Overlaps(inst.e1, inst.e2)) {
    throw ParseError(source, line, "sentence " + inst.sentence_id + ": entity spans overlap");
  }
  if (options.max_sentence_len > 0) ClipLength(inst, options.max_sentence_len, source, line);
  inst.verb_span = ExtractVerbSpan(inst);
  return out;
}

}  // namespace

std::string Instance::Text() const {
  std::string text;
  for (const Token &t : tokens) {
    if (!text.empty()) text += ' ';
    text += t.text;
  }
  return text;
}

RelationSchema::RelationSchema(std::vector<std::string> ids) : ids_(std::move(ids)) {
  if (ids_.empty() || ids_[0] != kNaRelation) {
    throw Error("relation schema must start with NA");
  }
  std::set<std::string> seen;
  for (const auto &id : ids_) {
    if (id.empty()) throw Error("relation schema contains an empty id");
    if (!seen.insert(id).second) throw Error("duplicate relation id in schema: " + id);
  }
}

RelationSchema RelationSchema::Load(const std::string &path) {
  std::vector<std::string> ids;
  int line_no = 0;
  for (const std::string &raw : ReadLines(path)) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty()) continue;
    if (ids.empty() && line != kNaRelation) {
      throw ParseError(path, line_no, "first relation must be NA");
    }
    ids.emplace_back(line);
  }
  if (ids.empty()) throw ParseError(path, 0, "empty relation schema");
  try {
    return RelationSchema(std::move(ids));
  } catch (const Error &e) {
    throw ParseError(path, 0, e.what());
  }
}

std::string RelationSchema::Serialize() const {
  std::string out;
  for (const auto &id : ids_) out += id + "\n";
  return out;
}

std::optional<int> RelationSchema::Find(std::string_view id) const {
  for (int i = 0; i < size(); ++i) {
    if (ids_[i] == id) return i;
  }
  return std::nullopt;
}

int RelationSchema::IndexOf(std::string_view id) const {
  if (auto i = Find(id)) return *i;
  throw Error("relation not in schema: " + std::string(id));
}

std::vector<InstanceBag> ParseCorpus(std::string_view text, const std::string &source,
                                     const CorpusOptions &options) {
  std::map<PairId, InstanceBag> bags;
  int line_no = 0;
  for (const std::string &raw : SplitString(text, '\n')) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty()) continue;
    ParsedLine parsed = ParseLine(std::string(line), source, line_no, options);
    InstanceBag &bag = bags[parsed.pair];
    bag.pair = parsed.pair;
    bag.instances.push_back(std::move(parsed.instance));
    for (auto &rel : parsed.relations) {
      if (rel == kNaRelation) continue;
      auto it = std::lower_bound(bag.relations.begin(), bag.relations.end(), rel);
      if (it == bag.relations.end() || *it != rel) bag.relations.insert(it, std::move(rel));
    }
  }
  std::vector<InstanceBag> out;
  out.reserve(bags.size());
  for (auto &[_, bag] : bags) out.push_back(std::move(bag));
  if (options.memory_capacity > 0) TruncateBags(out, options.memory_capacity);
  return out;
}

std::vector<InstanceBag> LoadCorpus(const std::string &path, const CorpusOptions &options) {
  return ParseCorpus(ReadFile(path), path, options);
}

std::string SerializeCorpus(const std::vector<InstanceBag> &bags) {
  std::string out;
  for (const InstanceBag &bag : bags) {
    for (const Instance &inst : bag.instances) {
      json obj;
      obj["sentence_id"] = inst.sentence_id;
      json tokens = json::array();
      for (const Token &t : inst.tokens) tokens.push_back({{"text", t.text}, {"pos", t.pos}});
      obj["tokens"] = std::move(tokens);
      obj["e1"] = {{"id", bag.pair.e1}, {"span", {inst.e1.begin, inst.e1.end}}};
      obj["e2"] = {{"id", bag.pair.e2}, {"span", {inst.e2.begin, inst.e2.end}}};
      obj["relations"] = bag.relations;
      out += obj.dump();
      out += '\n';
    }
  }
  return out;
}

void WriteCorpus(const std::string &path, const std::vector<InstanceBag> &bags) {
  WriteFileAtomic(path, SerializeCorpus(bags));
}

void TruncateBags(std::vector<InstanceBag> &bags, int capacity) {
  if (capacity < 1) throw Error("memory capacity must be at least 1");
  for (InstanceBag &bag : bags) {
    if (static_cast<int>(bag.instances.size()) > capacity) bag.instances.resize(capacity);
  }
}

std::size_t CountInstances(const std::vector<InstanceBag> &bags) {
  std::size_t n = 0;
  for (const auto &bag : bags) n += bag.instances.size();
  return n;
}

std::optional<Span> ExtractVerbSpan(const Instance &instance) {
  const Span &left = instance.e1.begin < instance.e2.begin ? instance.e1 : instance.e2;
  const Span &right = instance.e1.begin < instance.e2.begin ? instance.e2 : instance.e1;
  const Span gap{left.end, right.begin};
  if (gap.length() <= 0) return std::nullopt;

  std::optional<Span> best;
  int t = gap.begin;
  while (t < gap.end) {
    if (instance.tokens[t].pos.empty() || instance.tokens[t].pos[0] != 'V') {
      ++t;
      continue;
    }
    const int start = t;
    while (t < gap.end && !instance.tokens[t].pos.empty() && instance.tokens[t].pos[0] == 'V') ++t;
    if (!best || t - start > best->length()) best = Span{start, t};
  }
  return best ? best : std::optional<Span>(gap);
}

std::vector<std::string> EntityPhrase(const Instance &instance) {
  std::vector<std::string> out;
  for (const Span &s : {instance.e1, instance.e2}) {
    for (int t = s.begin; t < s.end; ++t) out.push_back(instance.tokens[t].text);
  }
  return out;
}

std::vector<std::string> VerbPhrase(const Instance &instance) {
  std::vector<std::string> out;
  if (!instance.verb_span) return out;
  for (int t = instance.verb_span->begin; t < instance.verb_span->end; ++t) {
    out.push_back(instance.tokens[t].text);
  }
  return out;
}

}  // namespace dsre
