// Copyright 2026 The lbrank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LBRANK_IO_H_
#define LBRANK_IO_H_

#include <filesystem>
#include <string>

namespace lbrank {

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial file. Throws IoError.
void WriteFileAtomic(const std::filesystem::path& path, const std::string& contents);

// Throws IoError if the file cannot be read.
std::string ReadFile(const std::filesystem::path& path);

}  // namespace lbrank

#endif  // LBRANK_IO_H_
