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

#ifndef GDOF_CLI_INSTANCE_IO_HPP
#define GDOF_CLI_INSTANCE_IO_HPP

// Instance files:
//   {"alpha": [[a11,a12],[a21,a22]], "beta": [[..],[..]], "name": "..."}
//   {"K": 3, "alpha": 0.6, "beta": 0.3, "name": "..."}
// "name" is optional; every other key is rejected.

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "gdof/core.hpp"

namespace gdof::cli {

// Bad user input. field() is a path such as "beta[0][1]" or "--p-grid".
class ValidationError : public std::runtime_error {
  public:
    ValidationError(std::string field, const std::string& message);
    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

// Only alpha given; meaningful to the budget commands.
struct AlphaOnly {
    Mat2 alpha{};
};

struct Instance {
    std::string name;
    std::variant<AlphaOnly, ChannelSpec2, SymmetricSpecK> spec;

    bool is_two_user() const { return std::holds_alternative<ChannelSpec2>(spec); }
    bool is_k_user() const { return std::holds_alternative<SymmetricSpecK>(spec); }
    Mat2 alpha2() const; // two-user or alpha-only
};

Instance parse_instance(const nlohmann::json& j, bool allow_alpha_only = false);
Instance load_instance(const std::string& path, bool allow_alpha_only = false);

nlohmann::json to_json(const Instance& inst);

} // namespace gdof::cli

#endif
