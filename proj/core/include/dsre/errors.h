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

#ifndef DSRE_ERRORS_H_
#define DSRE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace dsre {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor shapes do not conform for a primitive or optimizer update.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened for reading or writing.
class FileError : public Error {
 public:
  FileError(const std::string &path, const std::string &what)
      : Error(what + ": " + path), path_(path) {}
  const std::string &path() const { return path_; }

 private:
  std::string path_;
};

// Malformed input. line() is 1-based, or 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(const std::string &source, int line, const std::string &what)
      : Error(source + (line > 0 ? ":" + std::to_string(line) : "") + ": " +
              what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Training produced a non-finite loss.
class NonFiniteLossError : public Error {
 public:
  explicit NonFiniteLossError(std::vector<std::string> pair_ids)
      : Error(Describe(pair_ids)), pair_ids_(std::move(pair_ids)) {}
  const std::vector<std::string> &pair_ids() const { return pair_ids_; }

 private:
  static std::string Describe(const std::vector<std::string> &ids) {
    std::string msg = "non-finite loss in batch with pairs:";
    for (const auto &id : ids) msg += " " + id;
    return msg;
  }
  std::vector<std::string> pair_ids_;
};

}  // namespace dsre

#endif  // DSRE_ERRORS_H_
