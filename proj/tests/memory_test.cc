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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dsre/memory.h"
#include "test_util.h"

namespace dsre {
namespace {

using testing::MakeBag;
using testing::MakeInstance;
using testing::RandomTensor;

class MemoryTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(21);
    params_ = InitMemoryParams(config_, kRelations, rng);
  }
  std::vector<Var> Encodings(Tape &tape, int bag, std::uint64_t seed = 5) {
    std::mt19937_64 rng(seed);
    std::vector<Var> out;
    for (int i = 0; i < bag; ++i) {
      out.push_back(tape.Constant(RandomTensor({1, config_.latent_dim}, rng, 2.0)));
    }
    return out;
  }
  static double RowSum(const Var &v) {
    double s = 0.0;
    for (double x : v.value().data()) s += x;
    return s;
  }

  static constexpr int kRelations = 4;
  MemoryConfig config_{3, 10, 6};
  MemoryParams params_;
};

TEST_F(MemoryTest, SingleInstanceAttendsWithCertainty) {
  Tape tape;
  const MemoryVars vars = BindMemory(tape, params_);
  const auto enc = Encodings(tape, 1);
  const std::vector<double> h = {1.0};
  const MemoryOutput out = MemNetForward(vars, enc, h, config_.hops);
  ASSERT_EQ(out.attention.size(), 3u);
  for (const Var &a : out.attention) EXPECT_DOUBLE_EQ(a.value()[0], 1.0);
}

TEST_F(MemoryTest, IdenticalInstancesGiveUniformAttention) {
  Tape tape;
  const MemoryVars vars = BindMemory(tape, params_);
  const auto one = Encodings(tape, 1);
  const std::vector<Var> enc = {one[0], one[0], one[0], one[0]};
  const std::vector<double> h = {0.1, 0.2, 0.3, 0.4};
  for (const Var &a : MemNetForward(vars, enc, h, config_.hops).attention) {
    for (double p : a.value().data()) EXPECT_NEAR(p, 0.25, 1e-15);
  }
}

TEST_F(MemoryTest, AttentionAndScoresAreDistributions) {
  Tape tape;
  const MemoryVars vars = BindMemory(tape, params_);
  const auto enc = Encodings(tape, 7);
  const std::vector<double> h(7, 1.0 / 7);
  const MemoryOutput out = MemNetForward(vars, enc, h, config_.hops);
  for (const Var &a : out.attention) EXPECT_NEAR(RowSum(a), 1.0, 1e-12);
  EXPECT_EQ(out.scores.shape(), (Shape{1, kRelations}));
  EXPECT_NEAR(RowSum(out.scores), 1.0, 1e-12);
}

TEST_F(MemoryTest, MatchesLoopOracle) {
  Tape tape;
  const MemoryVars vars = BindMemory(tape, params_);
  const auto enc = Encodings(tape, 3);
  const std::vector<double> h = {0.5, 0.3, 0.2};
  const MemoryOutput out = MemNetForward(vars, enc, h, config_.hops);

  const int d = config_.latent_dim;
  auto apply = [&](const Tensor &w, const std::vector<double> &x) {
    std::vector<double> y(w.rows(), 0.0);
    for (int r = 0; r < w.rows(); ++r)
      for (int c = 0; c < w.cols(); ++c) y[r] += w.at(r, c) * x[c];
    return y;
  };
  std::vector<std::vector<double>> m, c;
  for (const Var &e : enc) {
    const std::vector<double> x(e.value().data().begin(), e.value().data().end());
    m.push_back(apply(params_.memory_proj, x));
    c.push_back(apply(params_.output_proj, x));
  }
  std::vector<double> u(d, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < d; ++j) u[j] += h[i] * m[i][j];
  for (int k = 0; k < config_.hops; ++k) {
    std::vector<double> logits(3, 0.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < d; ++j) logits[i] += u[j] * m[i][j];
    double mx = std::max({logits[0], logits[1], logits[2]}), z = 0.0;
    std::vector<double> p(3);
    for (int i = 0; i < 3; ++i) z += p[i] = std::exp(logits[i] - mx);
    for (double &v : p) v /= z;
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(out.attention[k].value()[i], p[i], 1e-12);
    std::vector<double> next = apply(params_.hop_transition, u);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < d; ++j) next[j] += p[i] * c[i][j];
    u = next;
  }
  std::vector<double> logits = apply(params_.relation_weight, u);
  for (int r = 0; r < kRelations; ++r) {
    EXPECT_NEAR(out.logits.value()[r], logits[r] + params_.relation_bias[r], 1e-12);
  }
}

TEST_F(MemoryTest, PermutingTheBagPermutesAttention) {
  Tape tape;
  const MemoryVars vars = BindMemory(tape, params_);
  const auto enc = Encodings(tape, 3);
  const std::vector<double> h = {0.5, 0.3, 0.2};
  const std::vector<Var> penc = {enc[2], enc[0], enc[1]};
  const std::vector<double> ph = {0.2, 0.5, 0.3};
  const MemoryOutput a = MemNetForward(vars, enc, h, config_.hops);
  const MemoryOutput b = MemNetForward(vars, penc, ph, config_.hops);
  for (int k = 0; k < config_.hops; ++k) {
    EXPECT_NEAR(b.attention[k].value()[0], a.attention[k].value()[2], 1e-12);
    EXPECT_NEAR(b.attention[k].value()[1], a.attention[k].value()[0], 1e-12);
  }
  for (int r = 0; r < kRelations; ++r) {
    EXPECT_NEAR(a.scores.value()[r], b.scores.value()[r], 1e-12);
  }
}

TEST_F(MemoryTest, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(6);
  std::vector<Tensor> enc_values;
  for (int i = 0; i < 3; ++i) enc_values.push_back(RandomTensor({1, config_.latent_dim}, rng));
  std::vector<Tensor *> tensors = {&params_.memory_proj, &params_.output_proj,
                                   &params_.hop_transition, &params_.relation_weight,
                                   &params_.relation_bias};
  for (auto &e : enc_values) tensors.push_back(&e);
  const std::vector<double> h = {0.2, 0.5, 0.3};
  const double err = testing::MaxFiniteDifferenceError(
      tensors, [&](Tape &tape, std::vector<Var> &bound) {
        const MemoryVars vars = BindMemory(tape, params_);
        std::vector<Var> enc;
        for (const Tensor &e : enc_values) enc.push_back(tape.Parameter(e));
        bound = {vars.memory_proj, vars.output_proj, vars.hop_transition, vars.relation_weight,
                 vars.relation_bias};
        bound.insert(bound.end(), enc.begin(), enc.end());
        return CrossEntropyWithLogits(MemNetForward(vars, enc, h, config_.hops).logits, 2);
      });
  EXPECT_LT(err, 1e-6);
}

TEST_F(MemoryTest, RejectsMismatchedHeuristic) {
  Tape tape;
  const MemoryVars vars = BindMemory(tape, params_);
  const auto enc = Encodings(tape, 2);
  const std::vector<double> h = {1.0};
  EXPECT_THROW(MemNetForward(vars, enc, h, 2), ShapeError);
}

TEST(RepresentativeTest, RelationIdSplitsIntoPhraseTokens) {
  EXPECT_EQ(RelationPhraseTokens("/business/person/company"),
            (std::vector<std::string>{"business", "person", "company"}));
  EXPECT_EQ(RelationPhraseTokens("/People.Place_lived"),
            (std::vector<std::string>{"people", "place", "lived"}));
}

TEST(RepresentativeTest, ShortestMatchWinsAndMissingIsFlagged) {
  const RelationSchema schema({"NA", "/business/person/company", "/location/contains"});
  const auto nine = MakeInstance("9", "the latest person to seek help is at acme",
                                 "DT JJS NN TO VB NN VBZ IN NNP", {2, 3}, {8, 9});
  const auto five = MakeInstance("5", "a person joined big acme", "DT NN VBD JJ NNP", {1, 2},
                                 {4, 5});
  const std::vector<InstanceBag> training = {MakeBag("x", "acme", {nine}, {}),
                                             MakeBag("y", "acme", {five}, {})};
  const RepresentativeSet reps = SelectRepresentatives(training, schema);
  ASSERT_EQ(reps.entries.size(), 2u);
  EXPECT_EQ(reps.entries[0].sentence_id, "5");
  EXPECT_FALSE(reps.entries[0].empty);
  EXPECT_TRUE(reps.entries[1].empty);
}

TEST(RepresentativeTest, TiesBreakOnTextThenId) {
  const RelationSchema schema({"NA", "/x/person"});
  const auto b = MakeInstance("b", "person b", "NN NN", {0, 1}, {1, 2});
  const auto a = MakeInstance("a", "person a", "NN NN", {0, 1}, {1, 2});
  const auto a2 = MakeInstance("0", "person a", "NN NN", {0, 1}, {1, 2});
  const RepresentativeSet reps =
      SelectRepresentatives({MakeBag("p", "q", {b, a, a2}, {})}, schema);
  EXPECT_EQ(reps.entries[0].sentence_id, "0");
}

TEST(HeuristicTest, IdenticalToRepresentativeScoresOne) {
  const StaticEmbeddings emb = StaticEmbeddings::FromVectors(
      2, {{"person", {1.0, 0.0}}, {"joined", {0.0, 1.0}}, {"rock", {-1.0, 0.0}}});
  const RelationSchema schema({"NA", "/x/person"});
  const auto rep = MakeInstance("r", "person joined", "NN VBD", {0, 1}, {1, 2});
  const auto away = MakeInstance("s", "rock rock", "NN NN", {0, 1}, {1, 2});
  const RepresentativeSet reps = SelectRepresentatives({MakeBag("p", "q", {rep}, {})}, schema);
  const InstanceBag bag = MakeBag("p", "q", {rep, away}, {});
  const auto probs = HeuristicAttention(bag, reps, emb);
  // s = [1, cos((-1,0), (0.5,0.5))] = [1, -1/sqrt(2)].
  const double s2 = -1.0 / std::sqrt(2.0);
  EXPECT_NEAR(probs[0], std::exp(1.0) / (std::exp(1.0) + std::exp(s2)), 1e-12);
  EXPECT_NEAR(probs[0] + probs[1], 1.0, 1e-12);
}

TEST(HeuristicTest, SingletonAndEquidistantCases) {
  const StaticEmbeddings emb =
      StaticEmbeddings::FromVectors(2, {{"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}});
  const std::vector<std::vector<double>> means = {{1.0, 1.0}};
  const auto x = MakeInstance("x", "a", "NN", {0, 1}, {0, 1});
  const auto y = MakeInstance("y", "b", "NN", {0, 1}, {0, 1});
  const std::vector<Instance> single = {x};
  EXPECT_EQ(HeuristicAttention(single, means, emb), std::vector<double>{1.0});
  const std::vector<Instance> pair = {x, y};
  const auto probs = HeuristicAttention(pair, means, emb);
  EXPECT_NEAR(probs[0], 0.5, 1e-15);
  EXPECT_NEAR(probs[1], 0.5, 1e-15);
}

}  // namespace
}  // namespace dsre
