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

#include "gdof/cli/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gdof::cli {

ValidationError::ValidationError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field))
{
}

Mat2 Instance::alpha2() const
{
    if (const auto* s = std::get_if<ChannelSpec2>(&spec))
        return s->alpha();
    if (const auto* a = std::get_if<AlphaOnly>(&spec))
        return a->alpha;
    throw ValidationError("alpha", "a 2x2 alpha matrix is required for this command");
}

namespace {

double number_at(const nlohmann::json& v, const std::string& path)
{
    if (!v.is_number())
        throw ValidationError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
        throw ValidationError(path, "must be finite");
    return d;
}

Mat2 matrix_at(const nlohmann::json& v, const std::string& path)
{
    if (!v.is_array() || v.size() != 2)
        throw ValidationError(path, "expected a 2x2 array");
    Mat2 m{};
    for (std::size_t k = 0; k < 2; ++k) {
        const std::string row = path + "[" + std::to_string(k) + "]";
        if (!v[k].is_array() || v[k].size() != 2)
            throw ValidationError(row, "expected an array of two numbers");
        for (std::size_t l = 0; l < 2; ++l)
            m[k][l] = number_at(v[k][l], row + "[" + std::to_string(l) + "]");
    }
    return m;
}

} // namespace

Instance parse_instance(const nlohmann::json& j, bool allow_alpha_only)
{
    if (!j.is_object())
        throw ValidationError("$", "instance must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (key != "alpha" && key != "beta" && key != "K" && key != "name")
            throw ValidationError(key, "unknown key");

    Instance inst;
    if (j.contains("name")) {
        if (!j["name"].is_string())
            throw ValidationError("name", "expected a string");
        inst.name = j["name"].get<std::string>();
    }
    if (!j.contains("alpha"))
        throw ValidationError("alpha", "missing");

    try {
        if (j.contains("K")) {
            const auto& k = j["K"];
            if (!k.is_number_integer())
                throw ValidationError("K", "expected an integer");
            if (!j.contains("beta"))
                throw ValidationError("beta", "missing");
            const auto users = k.get<long long>();
            if (users < 2 || users > 64)
                throw ValidationError("K", "must lie in [2, 64]");
            inst.spec = SymmetricSpecK(static_cast<int>(users), number_at(j["alpha"], "alpha"),
                                       number_at(j["beta"], "beta"));
            return inst;
        }
        const Mat2 alpha = matrix_at(j["alpha"], "alpha");
        if (!j.contains("beta")) {
            if (!allow_alpha_only)
                throw ValidationError("beta", "missing");
            // Validate alpha through a zero-CSIT spec.
            ChannelSpec2 check(alpha, Mat2{});
            inst.spec = AlphaOnly{alpha};
            return inst;
        }
        inst.spec = ChannelSpec2(alpha, matrix_at(j["beta"], "beta"));
    } catch (const SpecError& e) {
        throw ValidationError(e.field(), e.what());
    }
    return inst;
}

Instance load_instance(const std::string& path, bool allow_alpha_only)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("--instance", "cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("--instance", path + " is not valid JSON: " + e.what());
    }
    return parse_instance(j, allow_alpha_only);
}

nlohmann::json to_json(const Instance& inst)
{
    nlohmann::json j;
    if (!inst.name.empty())
        j["name"] = inst.name;
    auto mat = [](const Mat2& m) { return nlohmann::json{{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}; };
    if (const auto* s = std::get_if<ChannelSpec2>(&inst.spec)) {
        j["alpha"] = mat(s->alpha());
        j["beta"] = mat(s->beta());
    } else if (const auto* k = std::get_if<SymmetricSpecK>(&inst.spec)) {
        j["K"] = k->users();
        j["alpha"] = k->alpha();
        j["beta"] = k->beta();
    } else {
        j["alpha"] = mat(std::get<AlphaOnly>(inst.spec).alpha);
    }
    return j;
}

} // namespace gdof::cli
