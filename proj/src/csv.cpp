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

#include "qpotts/csv.hpp"

#include <cstdio>
#include <system_error>
#include <unistd.h>

#include "qpotts/error.hpp"

namespace qpotts {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

AtomicFile::AtomicFile(std::filesystem::path path, bool binary) : path_(std::move(path)) {
  temp_ = path_;
  temp_ += ".tmp." + std::to_string(::getpid());
  out_.open(temp_, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out_) throw IoError("cannot open " + temp_.string() + " for writing");
}

AtomicFile::~AtomicFile() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(temp_, ec);
  }
}

void AtomicFile::commit() {
  out_.flush();
  const bool ok = static_cast<bool>(out_);
  out_.close();
  if (!ok) throw IoError("write to " + temp_.string() + " failed");
  std::error_code ec;
  std::filesystem::rename(temp_, path_, ec);
  if (ec) throw IoError("cannot rename " + temp_.string() + " to " + path_.string() + ": " +
                        ec.message());
  committed_ = true;
}

void CsvWriter::comment(std::string_view text) { out_ << "# " << text << '\n'; }

void CsvWriter::config_block(std::string_view serialized) {
  std::size_t pos = 0;
  while (pos < serialized.size()) {
    auto end = serialized.find('\n', pos);
    if (end == std::string_view::npos) end = serialized.size();
    out_ << "# config: " << serialized.substr(pos, end - pos) << '\n';
    pos = end + 1;
  }
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  columns_ = columns.size();
  for (std::size_t k = 0; k < columns.size(); ++k) out_ << (k ? "," : "") << columns[k];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (columns_ && values.size() != columns_) throw ParameterError("CSV row width mismatch");
  for (std::size_t k = 0; k < values.size(); ++k) out_ << (k ? "," : "") << format_number(values[k]);
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvField>& values) {
  if (columns_ && values.size() != columns_) throw ParameterError("CSV row width mismatch");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out_ << ',';
    if (const auto* d = std::get_if<double>(&values[k])) {
      out_ << format_number(*d);
    } else {
      out_ << std::get<std::string>(values[k]);
    }
  }
  out_ << '\n';
}

}  // namespace qpotts
