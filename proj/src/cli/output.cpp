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

#include "gdof/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace gdof::cli {

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (v == 0.0)
        v = 0.0; // drop the sign of negative zero
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string format_fixed2(double v)
{
    std::string s = format_number(v);
    if (!std::isfinite(v) || s.find('e') != std::string::npos)
        return s;
    const auto dot = s.find('.');
    if (dot == std::string::npos)
        return s + ".00";
    const std::size_t decimals = s.size() - dot - 1;
    if (decimals < 2)
        s.append(2 - decimals, '0');
    return s;
}

nlohmann::json json_number(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    const std::string s = format_number(v);
    double r = 0;
    std::from_chars(s.data(), s.data() + s.size(), r);
    return r;
}

void CsvTable::add_row(const std::vector<double>& values)
{
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values)
        cells.push_back(format_number(v));
    add_row(std::move(cells));
}

void CsvTable::add_row(std::vector<std::string> cells)
{
    if (cells.size() != header_.size())
        throw std::logic_error("CsvTable: row width does not match the header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const
{
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_)
        line(r);
    return out;
}

void write_atomic(const std::string& path, std::string_view content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot write " + tmp.string());
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f)
            throw std::runtime_error("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
    }
}

namespace {

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

std::vector<std::string> lines_of(std::string_view text)
{
    if (text.empty() || text.back() != '\n')
        throw std::runtime_error("csv: output must end with a newline");
    text.remove_suffix(1);
    return split(text, '\n');
}

bool is_numeric_cell(const std::string& c)
{
    if (c == "nan" || c == "inf" || c == "-inf")
        return true;
    double v = 0;
    const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
    return res.ec == std::errc() && res.ptr == c.data() + c.size();
}

void check_rows(const std::vector<std::string>& lines, std::size_t width)
{
    if (lines.size() < 2)
        throw std::runtime_error("csv: no data rows");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i], ',');
        if (cells.size() != width)
            throw std::runtime_error("csv: row " + std::to_string(i) + " has " + std::to_string(cells.size()) +
                                     " fields, expected " + std::to_string(width));
        for (const auto& c : cells)
            if (!is_numeric_cell(c))
                throw std::runtime_error("csv: row " + std::to_string(i) + " has non-numeric field '" + c + "'");
    }
}

void require(const nlohmann::json& j, std::initializer_list<const char*> keys, const std::string& where)
{
    if (!j.is_object())
        throw std::runtime_error(where + ": expected an object");
    for (const char* k : keys)
        if (!j.contains(k))
            throw std::runtime_error(where + ": missing key '" + k + "'");
}

void require_numbers(const nlohmann::json& j, std::initializer_list<const char*> keys, const std::string& where)
{
    for (const char* k : keys)
        if (!j.at(k).is_number())
            throw std::runtime_error(where + ": '" + k + "' must be a number");
}

void require_array(const nlohmann::json& j, const char* key, const std::string& where)
{
    if (!j.at(key).is_array())
        throw std::runtime_error(where + ": '" + key + "' must be an array");
}

} // namespace

void validate_csv(std::string_view text, const std::vector<std::string>& expected_header)
{
    const auto lines = lines_of(text);
    if (split(lines.front(), ',') != expected_header)
        throw std::runtime_error("csv: unexpected header '" + lines.front() + "'");
    check_rows(lines, expected_header.size());
}

void validate_csv_numeric(std::string_view text, std::string_view first_column)
{
    const auto lines = lines_of(text);
    const auto header = split(lines.front(), ',');
    if (header.empty() || header.front() != first_column)
        throw std::runtime_error("csv: header must start with '" + std::string(first_column) + "'");
    check_rows(lines, header.size());
}

void validate_json(OutputKind kind, const nlohmann::json& j)
{
    switch (kind) {
    case OutputKind::Gdof2:
        require(j, {"D1", "D2", "d_sum", "beta1", "beta2", "binding", "regime"}, "gdof2");
        require_numbers(j, {"D1", "D2", "d_sum", "beta1", "beta2"}, "gdof2");
        return;
    case OutputKind::GdofK:
        require(j, {"K", "alpha", "beta", "d_sum"}, "gdofk");
        require_numbers(j, {"K", "alpha", "beta", "d_sum"}, "gdofk");
        return;
    case OutputKind::Budget:
        require(j, {"points", "breakpoints"}, "budget");
        require_array(j, "points", "budget");
        require_array(j, "breakpoints", "budget");
        for (const auto& p : j["points"]) {
            require(p, {"budget", "d_sum", "beta"}, "budget.points[]");
            require_numbers(p, {"budget", "d_sum"}, "budget.points[]");
        }
        return;
    case OutputKind::AchieveJson:
        require(j, {"instance", "layout", "p_grid", "per_layer_exponents", "per_user_slopes"}, "achieve");
        require(j["layout"], {"case", "layers", "target"}, "achieve.layout");
        require_array(j, "p_grid", "achieve");
        require_array(j, "per_layer_exponents", "achieve");
        require_array(j, "per_user_slopes", "achieve");
        for (const auto& l : j["per_layer_exponents"])
            require(l, {"message", "receiver", "sinr_exponent", "power_exponent", "load"},
                    "achieve.per_layer_exponents[]");
        for (const auto& u : j["per_user_slopes"]) {
            require(u, {"user", "slope", "target"}, "achieve.per_user_slopes[]");
            require_numbers(u, {"user", "slope", "target"}, "achieve.per_user_slopes[]");
        }
        return;
    case OutputKind::AisProb:
        require(j, {"p_bar", "pairs", "all_pass"}, "ais-prob");
        require_array(j, "pairs", "ais-prob");
        for (const auto& p : j["pairs"])
            require(p, {"lambda", "nu", "estimate", "bound", "sigma", "pass"}, "ais-prob.pairs[]");
        return;
    case OutputKind::AisSizeJson:
        require(j, {"fitted_exponent", "bound_exponent", "pass"}, "ais-size");
        require_numbers(j, {"fitted_exponent", "bound_exponent"}, "ais-size");
        if (!j["pass"].is_boolean())
            throw std::runtime_error("ais-size: 'pass' must be a boolean");
        return;
    case OutputKind::AchieveCsv:
    case OutputKind::AisSizeCsv:
    case OutputKind::Sweep:
        throw std::invalid_argument("validate_json: this output kind is CSV");
    }
}

} // namespace gdof::cli
