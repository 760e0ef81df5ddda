// Copyright 2026 The qpotts Authors
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

// CSV tables with `#` metadata lines, and files that only appear under their
// final name once fully written.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qpotts {

/// %.17g rendering.
std::string format_number(double value);

/// A temporary sibling file renamed onto `path` by commit(). The temporary is
/// removed if the object dies uncommitted.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path path, bool binary = false);
  ~AtomicFile();
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ofstream& stream() { return out_; }
  const std::filesystem::path& path() const noexcept { return path_; }
  /// Flushes, closes and renames. Throws IoError.
  void commit();

 private:
  std::filesystem::path path_;
  std::filesystem::path temp_;
  std::ofstream out_;
  bool committed_ = false;
};

using CsvField = std::variant<double, std::string>;

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(std::string_view text);
  /// Writes each line of a multi-line block as `# config: <line>`.
  void config_block(std::string_view serialized);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row(const std::vector<CsvField>& values);

 private:
  std::ostream& out_;
  std::size_t columns_ = 0;
};

}  // namespace qpotts
