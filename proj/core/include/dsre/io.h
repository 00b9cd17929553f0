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

#ifndef DSRE_IO_H_
#define DSRE_IO_H_

#include <string>
#include <string_view>
#include <vector>

namespace dsre {

// Whole-file read. Throws FileError when the file cannot be opened.
std::string ReadFile(const std::string &path);
std::vector<std::string> ReadLines(const std::string &path);

// Writes to a temporary sibling and renames it over `path`, so readers never
// observe a partial file.
void WriteFileAtomic(const std::string &path, std::string_view content);

std::vector<std::string> SplitString(std::string_view text, char sep);
std::string_view Trim(std::string_view text);

}  // namespace dsre

#endif  // DSRE_IO_H_
