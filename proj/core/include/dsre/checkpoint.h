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

#ifndef DSRE_CHECKPOINT_H_
#define DSRE_CHECKPOINT_H_

#include <string>
#include <string_view>

#include "dsre/config.h"
#include "dsre/model.h"

namespace dsre {

// Checkpoint layout:
//
//   DSRECKPT 1
//   section <name> <byte count>\n<bytes>\n      (config, schema, words,
//                                               pos_tags, representatives)
//   tensors <count>
//   <name> <rank> <dims...> <byte offset>        (one line per tensor)
//   data <byte count>\n<little-endian float32 arrays>
//
// Weights are stored in single precision; loading widens them back to double.
struct Checkpoint {
  TrainConfig config;
  Model model;
};

std::string SerializeCheckpoint(const Model &model, const TrainConfig &config);
void SaveCheckpoint(const std::string &path, const Model &model, const TrainConfig &config);
Checkpoint ParseCheckpoint(std::string_view bytes, const std::string &source);
Checkpoint LoadCheckpoint(const std::string &path);

}  // namespace dsre

#endif  // DSRE_CHECKPOINT_H_
