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

#include "dsre/gradcheck.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "dsre/errors.h"
#include "dsre/synthetic.h"

namespace dsre {
namespace {

double LossValue(const Model &model, const BatchPlan &plan, double lambda) {
  Tape tape;
  const ModelVars vars = BindModel(tape, model);
  return TotalLoss(vars, plan, lambda, model.config.memory.hops).total.value().item();
}

}  // namespace

double RelativeError(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult CheckModelGradients(Model &model, const BatchPlan &plan,
                                    const GradCheckOptions &options) {
  const auto start = std::chrono::steady_clock::now();
  Tape tape;
  const ModelVars vars = BindModel(tape, model);
  const LossTerms terms = TotalLoss(vars, plan, options.lambda_couple, model.config.memory.hops);
  tape.Backward(terms.total);
  const auto param_vars = ParameterVars(vars);
  auto named = model.params.Named();

  std::mt19937_64 rng(options.seed);
  GradCheckResult result;
  for (std::size_t p = 0; p < named.size(); ++p) {
    Tensor &param = *named[p].second;
    const Tensor &grad = tape.grad(param_vars[p]);
    std::vector<std::size_t> nonzero;
    for (std::size_t k = 0; k < grad.size(); ++k) {
      if (grad[k] != 0.0) nonzero.push_back(k);
    }
    std::vector<std::size_t> coords;
    std::uniform_int_distribution<std::size_t> any(0, param.size() - 1);
    for (int c = 0; c < options.coords_per_tensor; ++c) {
      if (c % 2 == 0 && !nonzero.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, nonzero.size() - 1);
        coords.push_back(nonzero[pick(rng)]);
      } else {
        coords.push_back(any(rng));
      }
    }
    for (std::size_t k : coords) {
      const double saved = param[k];
      param[k] = saved + options.step;
      const double up = LossValue(model, plan, options.lambda_couple);
      param[k] = saved - options.step;
      const double down = LossValue(model, plan, options.lambda_couple);
      param[k] = saved;
      const double numeric = (up - down) / (2.0 * options.step);
      const double err = RelativeError(grad[k], numeric);
      ++result.coordinates_checked;
      if (err > result.max_relative_error) {
        result.max_relative_error = err;
        result.worst_tensor = named[p].first;
        result.worst_index = k;
      }
    }
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

GradCheckResult RunGradCheck(const GradCheckOptions &options) {
  SyntheticConfig sc;
  sc.num_relations = 4;
  sc.bags_per_relation = 1;
  sc.bag_size = 3;
  sc.noise_rate = 0.3;
  sc.test_fraction = 0.0;
  sc.seed = options.seed;
  SyntheticCorpus corpus = GenerateSynthetic(sc);
  std::vector<InstanceBag> bags(corpus.train.begin(), corpus.train.begin() + 2);
  bags[1].instances.resize(2);

  TrainConfig config;
  config.seed = options.seed;
  config.lambda_couple = options.lambda_couple;
  Model model = InitModel(config.model, bags, corpus.schema, corpus.embeddings, options.seed);
  const auto rep_means = RepresentativeMeans(model.representatives, corpus.embeddings);
  std::vector<PreparedBag> prepared;
  for (const auto &bag : bags) prepared.push_back(PrepareBag(model, bag, corpus.embeddings, rep_means));
  const auto examples = ExpandExamples(bags, model.schema);
  std::mt19937_64 rng(options.seed);
  const BatchPlan plan = PlanBatch(examples, prepared, options.lambda_couple, config.m_max, rng,
                                   corpus.embeddings);
  return CheckModelGradients(model, plan, options);
}

}  // namespace dsre
