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
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "dsre/coupling.h"
#include "test_util.h"

namespace dsre {
namespace {

using testing::MakeBag;
using testing::MakeInstance;
using testing::RandomTensor;

TEST(CouplingTest, EqualInputsGiveZeroAsymmetricPart) {
  std::mt19937_64 rng(1);
  Tape tape;
  const Var h = tape.Constant(RandomTensor({1, 8}, rng));
  EXPECT_EQ(AsymmetricFeatures(h, h).value(), Tensor(Shape{1, 8}, 0.0));
}

TEST(CouplingTest, ZeroWeightsGiveOneHalf) {
  CouplingParams p{Tensor(Shape{2, 8}, 0.0), Tensor(Shape{2}, 0.0)};
  std::mt19937_64 rng(1);
  Tape tape;
  const CouplingVars vars = BindCoupling(tape, p);
  const Tensor g = CouplingForward(vars, tape.Constant(RandomTensor({1, 4}, rng)),
                                   tape.Constant(RandomTensor({1, 4}, rng)))
                       .value();
  EXPECT_EQ(g, Tensor::Matrix(1, 2, {0.5, 0.5}));
}

TEST(CouplingTest, SwappingInputsOnlyMattersThroughAsymmetricBlock) {
  std::mt19937_64 rng(2);
  CouplingParams p = InitCouplingParams(4, rng);
  Tape tape;
  const Var h1 = tape.Constant(RandomTensor({1, 4}, rng));
  const Var h2 = tape.Constant(RandomTensor({1, 4}, rng));
  const Tensor s12 = SymmetricFeatures(h1, h2).value(), s21 = SymmetricFeatures(h2, h1).value();
  const Tensor a12 = AsymmetricFeatures(h1, h2).value(), a21 = AsymmetricFeatures(h2, h1).value();
  EXPECT_EQ(s12, s21);
  for (std::size_t i = 0; i < a12.size(); ++i) EXPECT_EQ(a12[i], -a21[i]);

  {
    const CouplingVars vars = BindCoupling(tape, p);
    const Tensor g12 = CouplingForward(vars, h1, h2).value();
    const Tensor g21 = CouplingForward(vars, h2, h1).value();
    EXPECT_FALSE(g12 == g21);
  }
  for (int r = 0; r < 2; ++r)
    for (int c = 4; c < 8; ++c) p.weight.at(r, c) = 0.0;
  const CouplingVars vars = BindCoupling(tape, p);
  const Tensor g12 = CouplingForward(vars, h1, h2).value();
  const Tensor g21 = CouplingForward(vars, h2, h1).value();
  EXPECT_EQ(g12, g21);
}

TEST(CouplingTest, ForwardMatchesHandComputation) {
  CouplingParams p{Tensor::Matrix(2, 4, {1, 0, 0, 1, 0, -1, 2, 0}), Tensor::Row({0.1, -0.2})};
  Tape tape;
  const CouplingVars vars = BindCoupling(tape, p);
  const Tensor g = CouplingForward(vars, tape.Constant(Tensor::Matrix(1, 2, {1.0, 2.0})),
                                   tape.Constant(Tensor::Matrix(1, 2, {3.0, -1.0})))
                       .value();
  // features = [3, -2, -2, 3]
  auto sigmoid = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
  EXPECT_NEAR(g[0], sigmoid(3.0 + 3.0 + 0.1), 1e-15);
  EXPECT_NEAR(g[1], sigmoid(2.0 - 4.0 - 0.2), 1e-15);
}

TEST(CouplingTest, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(3);
  CouplingParams p = InitCouplingParams(5, rng);
  Tensor h1 = RandomTensor({1, 5}, rng), h2 = RandomTensor({1, 5}, rng);
  CouplingPair pair{0, 0, 0.8, 0.3};
  const double err = testing::MaxFiniteDifferenceError(
      {&p.weight, &p.bias, &h1, &h2}, [&](Tape &tape, std::vector<Var> &bound) {
        const CouplingVars vars = BindCoupling(tape, p);
        const Var a = tape.Parameter(h1), b = tape.Parameter(h2);
        bound = {vars.weight, vars.bias, a, b};
        return CouplingPairLoss(CouplingForward(vars, a, b), pair);
      });
  EXPECT_LT(err, 1e-6);
}

TEST(SimilarityTargetTest, SharedOrthogonalAndHandCases) {
  const StaticEmbeddings emb = StaticEmbeddings::FromVectors(
      3, {{"v1", {1, 0, 0}}, {"v2", {1, 1, 0}}, {"v3", {0, 1, 1}}, {"v4", {0, 0, 1}},
          {"neg", {-1, 0, 0}}});
  using P = std::vector<std::string>;
  EXPECT_DOUBLE_EQ(*SimilarityTarget(P{"v2", "v3"}, P{"v3"}, emb), 1.0);
  EXPECT_EQ(*SimilarityTarget(P{"v1"}, P{"v4"}, emb), 0.0);
  EXPECT_EQ(*SimilarityTarget(P{"v1"}, P{"neg"}, emb), 0.0);
  // max(cos(v1, v2), cos(v1, v3)) = max(1/sqrt(2), 0)
  EXPECT_NEAR(*SimilarityTarget(P{"v1"}, P{"v2", "v3"}, emb), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_FALSE(SimilarityTarget(P{"unknown"}, P{"v1"}, emb).has_value());
  EXPECT_FALSE(SimilarityTarget(P{}, P{"v1"}, emb).has_value());
}

TEST(CouplingLossTest, AveragesDefinedTargets) {
  Tape tape;
  const Var g = tape.Constant(Tensor::Matrix(1, 2, {0.7, 0.2}));
  EXPECT_NEAR(CouplingPairLoss(g, {0, 0, 1.0, std::nullopt}).value().item(), 0.09, 1e-15);
  EXPECT_NEAR(CouplingPairLoss(g, {0, 0, std::nullopt, 0.6}).value().item(), 0.16, 1e-15);
  EXPECT_NEAR(CouplingPairLoss(g, {0, 0, 1.0, 0.6}).value().item(), (0.09 + 0.16) / 2, 1e-15);
  EXPECT_FALSE(CouplingPairLoss(g, {0, 0, std::nullopt, std::nullopt}).valid());
}

class PairSamplingTest : public ::testing::Test {
 protected:
  static InstanceBag Bag(const std::string &e1, int n) {
    std::vector<Instance> instances;
    for (int i = 0; i < n; ++i) {
      instances.push_back(MakeInstance(e1 + std::to_string(i), e1 + " joined acme",
                                       "NNP VBD NNP", {0, 1}, {2, 3}));
    }
    return MakeBag(e1, "acme", instances, {});
  }
  StaticEmbeddings emb_ = StaticEmbeddings::FromVectors(2, {{"joined", {1.0, 0.0}}});
};

TEST_F(PairSamplingTest, SmallBagsUseEveryPair) {
  std::mt19937_64 rng(1);
  const auto pairs = SampleCouplingPairs(Bag("a", 2), Bag("b", 3), 25, rng, emb_);
  ASSERT_EQ(pairs.size(), 6u);
  std::set<std::pair<int, int>> seen;
  for (const auto &p : pairs) seen.insert({p.instance_a, p.instance_b});
  EXPECT_EQ(seen.size(), 6u);
  EXPECT_DOUBLE_EQ(*pairs[0].target_verb, 1.0);
  EXPECT_FALSE(pairs[0].target_entity.has_value());  // entity tokens have no vectors
}

TEST_F(PairSamplingTest, LargeBagsAreCapped) {
  std::mt19937_64 rng(1);
  const auto pairs = SampleCouplingPairs(Bag("a", 10), Bag("b", 10), 25, rng, emb_);
  ASSERT_EQ(pairs.size(), 25u);
  std::set<std::pair<int, int>> seen;
  for (const auto &p : pairs) seen.insert({p.instance_a, p.instance_b});
  EXPECT_EQ(seen.size(), 25u);
}

TEST_F(PairSamplingTest, SameSeedSamePairs) {
  std::mt19937_64 r1(9), r2(9);
  const auto a = SampleCouplingPairs(Bag("a", 10), Bag("b", 10), 25, r1, emb_);
  const auto b = SampleCouplingPairs(Bag("a", 10), Bag("b", 10), 25, r2, emb_);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].instance_a, b[i].instance_a);
    EXPECT_EQ(a[i].instance_b, b[i].instance_b);
  }
}

TEST_F(PairSamplingTest, SamePairIdIsRejected) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(SampleCouplingPairs(Bag("a", 2), Bag("a", 2), 25, rng, emb_), Error);
}

}  // namespace
}  // namespace dsre
