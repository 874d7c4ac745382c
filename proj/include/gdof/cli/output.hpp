// SPDX-License-Identifier: Apache-2.0
//
// gdof-lab: GDoF laboratory for the MISO broadcast channel with partial CSIT
// Copyright (C) 2026 The gdof-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef GDOF_CLI_OUTPUT_HPP
#define GDOF_CLI_OUTPUT_HPP

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace gdof::cli {

// Shortest "%.12g" rendering, independent of the global locale.
std::string format_number(double v);

// As format_number but with at least two digits after the point ("1.70").
std::string format_fixed2(double v);

// Value rounded to 12 significant digits; NaN and infinities become null.
nlohmann::json json_number(double v);

class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(const std::vector<double>& values);
    void add_row(std::vector<std::string> cells);

    const std::vector<std::string>& header() const noexcept { return header_; }
    std::size_t rows() const noexcept { return rows_.size(); }
    std::string str() const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Writes through a sibling temporary file followed by rename.
void write_atomic(const std::string& path, std::string_view content);

// Output schemas. Each validator throws std::runtime_error describing the
// first violation.
enum class OutputKind { Gdof2, GdofK, Budget, AchieveJson, AchieveCsv, AisProb, AisSizeCsv, AisSizeJson, Sweep };

void validate_csv(std::string_view text, const std::vector<std::string>& expected_header);
void validate_csv_numeric(std::string_view text, std::string_view first_column);
void validate_json(OutputKind kind, const nlohmann::json& j);

} // namespace gdof::cli

#endif
