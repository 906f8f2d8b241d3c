// Copyright 2026 The thz Authors
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

#include "cli/output.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <cmath>
#include <sstream>

#include "thz/cli.hpp"
#include "thz/errors.hpp"

namespace thz::cli {

namespace {

std::string hex(const unsigned char* d, unsigned n) {
  std::string s;
  for (unsigned i = 0; i < n; ++i) s += fmt::format("{:02x}", d[i]);
  return s;
}

std::string sha1(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned n = 0;
  if (EVP_Digest(data.data(), data.size(), md, &n, EVP_sha1(), nullptr) != 1) throw NumericError("sha1 failed");
  return hex(md, n);
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

std::string git_blob_hash(const std::string& content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  return sha1(blob + content);
}

namespace detail {

Cell::Cell(double x) : text(format_double(x)) {}
Cell::Cell(const char* s) : text(quote(s)) {}
Cell::Cell(const std::string& s) : text(quote(s)) {}

CsvWriter::CsvWriter(const std::string& path, const std::string& hash, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw NumericError("cannot write " + path);
  out_ << "# manifest: " << hash << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << "\n";
}

void CsvWriter::row(std::initializer_list<Cell> cells) { row(std::vector<Cell>(cells)); }

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_) throw NumericError("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i].text;
  out_ << "\n";
}

std::string sha1_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return git_blob_hash(ss.str());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericError("cannot write " + path);
  out << text;
}

}  // namespace detail

}  // namespace thz::cli
