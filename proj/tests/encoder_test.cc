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

#include <algorithm>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dsre/encoder.h"
#include "dsre/synthetic.h"
#include "dsre/trainer.h"
#include "test_util.h"

namespace dsre {
namespace {

using testing::MakeBag;
using testing::MakeInstance;

class EncoderTest : public ::testing::Test {
 protected:
  void SetUp() override {
    config_.d_word = 4;
    config_.d_pos_tag = 2;
    config_.d_position = 3;
    config_.feature_maps_per_width = 5;
    inst_ = MakeInstance("x", "smith joined acme", "NNP VBD NNP", {0, 1}, {2, 3});
    const std::vector<InstanceBag> bags = {MakeBag("smith", "acme", {inst_}, {})};
    words_ = Vocabulary::Words(bags);
    tags_ = Vocabulary::PosTags(bags);
    std::mt19937_64 rng(4);
    params_ = InitEncoderParams(config_, words_, tags_.size(), nullptr, rng);
  }

  EncoderConfig config_;
  Instance inst_;
  Vocabulary words_, tags_;
  EncoderParams params_;
};

TEST_F(EncoderTest, EmbeddingRowIsConcatenationOfLookups) {
  Tape tape;
  const EncoderVars vars = BindEncoder(tape, params_, Activation::kRelu);
  const FeatureMatrix fm = Featurize(inst_, words_, tags_);
  const Tensor &emb = EmbedInstance(vars, fm).value();
  ASSERT_EQ(emb.shape(), (Shape{3, config_.input_dim()}));
  for (int t = 0; t < 3; ++t) {
    std::vector<double> expected;
    auto append = [&](const Tensor &table, int row) {
      for (int c = 0; c < table.cols(); ++c) expected.push_back(table.at(row, c));
    };
    append(params_.word_table, fm.word_ids[t]);
    append(params_.pos_table, fm.pos_ids[t]);
    append(params_.position1_table, PositionIndex(fm.pos1_offsets[t]));
    append(params_.position2_table, PositionIndex(fm.pos2_offsets[t]));
    for (int c = 0; c < emb.cols(); ++c) EXPECT_EQ(emb.at(t, c), expected[c]);
  }
}

TEST_F(EncoderTest, DefaultDimensionsGive450ColumnsAnd256Outputs) {
  const EncoderConfig defaults;
  EXPECT_EQ(defaults.input_dim(), 450);
  EXPECT_EQ(defaults.output_dim(), 256);
  std::mt19937_64 rng(1);
  const EncoderParams p = InitEncoderParams(defaults, words_, tags_.size(), nullptr, rng);
  Tape tape;
  const EncoderVars vars = BindEncoder(tape, p, Activation::kRelu);
  const Instance one = MakeInstance("o", "acme", "NNP", {0, 1}, {0, 1});
  FeatureMatrix fm = Featurize(one, words_, tags_);
  EXPECT_EQ(EmbedInstance(vars, fm).shape(), (Shape{1, 450}));
  EXPECT_EQ(EncodeInstance(vars, fm).shape(), (Shape{1, 256}));
}

TEST_F(EncoderTest, IdenticalTokensGiveIdenticalRows) {
  Tape tape;
  const EncoderVars vars = BindEncoder(tape, params_, Activation::kRelu);
  FeatureMatrix fm;
  fm.word_ids = {1, 1};
  fm.pos_ids = {1, 1};
  fm.pos1_offsets = {4, 4};
  fm.pos2_offsets = {-2, -2};
  const Tensor &emb = EmbedInstance(vars, fm).value();
  for (int c = 0; c < emb.cols(); ++c) EXPECT_EQ(emb.at(0, c), emb.at(1, c));
}

TEST_F(EncoderTest, ZeroParametersGiveZeroOutput) {
  for (auto *t : {&params_.word_table, &params_.pos_table, &params_.position1_table,
                  &params_.position2_table}) {
    t->Fill(0.0);
  }
  for (auto &f : params_.filters) {
    f.weight.Fill(0.0);
    f.bias.Fill(0.0);
  }
  Tape tape;
  const EncoderVars vars = BindEncoder(tape, params_, Activation::kRelu);
  const Tensor out = EncodeInstance(vars, Featurize(inst_, words_, tags_)).value();
  EXPECT_EQ(out, Tensor(Shape{1, config_.output_dim()}, 0.0));
}

TEST_F(EncoderTest, SinglePositionWidthOneFilterPicksCoordinate) {
  const int j = 2;
  ConvFilter &f = params_.filters[0];
  ASSERT_EQ(f.width, 1);
  f.weight.Fill(0.0);
  f.weight.at(0, j) = 1.0;
  f.bias[0] = 0.05;
  Tape tape;
  const EncoderVars vars = BindEncoder(tape, params_, Activation::kRelu);
  const Instance one = MakeInstance("o", "acme", "NNP", {0, 1}, {0, 1});
  const FeatureMatrix fm = Featurize(one, words_, tags_);
  const Var emb = EmbedInstance(vars, fm);
  const Tensor out = CnnEncode(vars, emb).value();
  EXPECT_DOUBLE_EQ(out[0], std::max(0.0, emb.value().at(0, j) + 0.05));
}

TEST_F(EncoderTest, ShortInputIsPaddedWithZeroRows) {
  // Width 2 on one token sees [x ; 0], so only the first half of the kernel acts.
  ConvFilter &f = params_.filters[1];
  ASSERT_EQ(f.width, 2);
  Tape tape;
  const EncoderVars vars = BindEncoder(tape, params_, Activation::kTanh);
  const Instance one = MakeInstance("o", "acme", "NNP", {0, 1}, {0, 1});
  const Var emb = EmbedInstance(vars, Featurize(one, words_, tags_));
  const Tensor out = CnnEncode(vars, emb).value();
  const int d = config_.input_dim();
  for (int m = 0; m < config_.feature_maps_per_width; ++m) {
    double z = f.bias[m];
    for (int c = 0; c < d; ++c) z += f.weight.at(m, c) * emb.value().at(0, c);
    EXPECT_NEAR(out[config_.feature_maps_per_width + m], std::tanh(z), 1e-12);
  }
}

TEST_F(EncoderTest, WidthOneFeaturesArePermutationInvariant) {
  std::mt19937_64 rng(9);
  const Tensor rows = testing::RandomTensor({5, config_.input_dim()}, rng);
  Tensor permuted(rows.shape());
  const std::vector<int> order = {3, 0, 4, 1, 2};
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < rows.cols(); ++c) permuted.at(r, c) = rows.at(order[r], c);
  }
  Tape tape;
  const EncoderVars vars = BindEncoder(tape, params_, Activation::kRelu);
  const Tensor a = CnnEncode(vars, tape.Constant(rows)).value();
  const Tensor b = CnnEncode(vars, tape.Constant(permuted)).value();
  const int maps = config_.feature_maps_per_width;
  bool width_two_differs = false;
  for (int m = 0; m < maps; ++m) {
    EXPECT_DOUBLE_EQ(a[m], b[m]);
    width_two_differs |= a[maps + m] != b[maps + m];
  }
  EXPECT_TRUE(width_two_differs);
}

TEST_F(EncoderTest, GradientsMatchFiniteDifferences) {
  for (Activation act : {Activation::kRelu, Activation::kTanh}) {
    std::vector<Tensor *> tensors = {&params_.word_table, &params_.pos_table,
                                     &params_.position1_table, &params_.position2_table};
    for (auto &f : params_.filters) {
      tensors.push_back(&f.weight);
      tensors.push_back(&f.bias);
    }
    const FeatureMatrix fm = Featurize(inst_, words_, tags_);
    std::mt19937_64 rng(2);
    const Tensor w = testing::RandomTensor({1, config_.output_dim()}, rng);
    const double err = testing::MaxFiniteDifferenceError(
        tensors, [&](Tape &tape, std::vector<Var> &bound) {
          const EncoderVars vars = BindEncoder(tape, params_, act);
          bound = {vars.word_table, vars.pos_table, vars.position1_table, vars.position2_table};
          for (const auto &f : vars.filters) {
            bound.push_back(f.weight);
            bound.push_back(f.bias);
          }
          return Sum(Mul(EncodeInstance(vars, fm), tape.Constant(w)));
        });
    EXPECT_LT(err, 1e-6);
  }
}

TEST_F(EncoderTest, PretrainedRowsInitializeWordTable) {
  const StaticEmbeddings emb =
      StaticEmbeddings::FromVectors(4, {{"acme", {1.0, 2.0, 3.0, 4.0}}});
  std::mt19937_64 rng(4);
  const EncoderParams p = InitEncoderParams(config_, words_, tags_.size(), &emb, rng);
  const int id = words_.Lookup("acme");
  for (int c = 0; c < 4; ++c) EXPECT_EQ(p.word_table.at(id, c), c + 1.0);
  const int other = words_.Lookup("smith");
  for (int c = 0; c < 4; ++c) EXPECT_LE(std::abs(p.word_table.at(other, c)), 0.25);
  const StaticEmbeddings wrong = StaticEmbeddings::FromVectors(3, {{"acme", {1.0, 2.0, 3.0}}});
  EXPECT_THROW(InitEncoderParams(config_, words_, tags_.size(), &wrong, rng), ShapeError);
}

TEST(StaticEmbeddingsTest, ParseLookupAndMean) {
  const StaticEmbeddings emb = StaticEmbeddings::Parse("a 1 0\nb 0 2\n", "t");
  EXPECT_EQ(emb.dim(), 2);
  EXPECT_TRUE(emb.Lookup("zzz").empty());
  const std::vector<std::string> toks = {"a", "b", "zzz"};
  EXPECT_EQ(emb.MeanVector(toks), (std::vector<double>{0.5, 1.0}));
  EXPECT_THROW(StaticEmbeddings::Parse("a 1 0\nb 0\n", "t"), ParseError);
  EXPECT_THROW(StaticEmbeddings::Load("/nonexistent/vectors.txt"), FileError);
}

TEST(StaticEmbeddingsTest, CosineHandlesZeroNorm) {
  const std::vector<double> a = {1.0, 0.0}, b = {0.0, 0.0}, c = {2.0, 0.0};
  EXPECT_EQ(Cosine(a, b), 0.0);
  EXPECT_DOUBLE_EQ(Cosine(a, c), 1.0);
}

TEST(StaticEmbeddingsTest, UnchangedAfterTraining) {
  SyntheticConfig sc;
  sc.num_relations = 3;
  sc.bags_per_relation = 6;
  sc.bag_size = 2;
  sc.embedding_dim = 8;
  const SyntheticCorpus corpus = GenerateSynthetic(sc);
  const std::vector<double> before(corpus.embeddings.storage().begin(),
                                   corpus.embeddings.storage().end());
  TrainConfig config;
  config.model.encoder.d_word = 8;
  config.model.encoder.d_pos_tag = 4;
  config.model.encoder.d_position = 4;
  config.model.encoder.feature_maps_per_width = 6;
  config.model.memory.latent_dim = 12;
  config.learning_rate = 1e-2;
  Trainer trainer(config, corpus.train, corpus.schema, corpus.embeddings);
  const Tensor table_before = trainer.model().params.encoder.word_table;
  const auto &examples = trainer.examples();
  for (int step = 0; step < 100; ++step) {
    const std::size_t begin = (step * 4) % examples.size();
    const std::size_t end = std::min(examples.size(), begin + 4);
    trainer.Step(std::span(examples).subspan(begin, end - begin));
  }
  const std::vector<double> after(corpus.embeddings.storage().begin(),
                                  corpus.embeddings.storage().end());
  EXPECT_EQ(before, after);
  EXPECT_FALSE(trainer.model().params.encoder.word_table == table_before);
}

}  // namespace
}  // namespace dsre
