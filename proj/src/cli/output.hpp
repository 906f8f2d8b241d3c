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

#pragma once

#include <fstream>
#include <initializer_list>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace thz::cli::detail {

// One CSV cell: numbers print with 17 significant digits.
struct Cell {
  std::string text;
  Cell(double x);
  Cell(int x) : text(std::to_string(x)) {}
  Cell(long x) : text(std::to_string(x)) {}
  Cell(unsigned long x) : text(std::to_string(x)) {}
  Cell(unsigned long long x) : text(std::to_string(x)) {}
  Cell(bool b) : text(b ? "1" : "0") {}
  Cell(const char* s);
  Cell(const std::string& s);
};

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& hash, const std::vector<std::string>& header);
  void row(std::initializer_list<Cell> cells);
  void row(const std::vector<Cell>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

std::string sha1_file(const std::string& path);

void write_text(const std::string& path, const std::string& text);

}  // namespace thz::cli::detail
