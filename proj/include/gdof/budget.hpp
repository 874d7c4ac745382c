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

#ifndef GDOF_BUDGET_HPP
#define GDOF_BUDGET_HPP

// Allocation of a total CSIT budget b11 + b12 + b21 + b22 across the four
// links, and the optimal sum-GDoF-versus-budget curve.

#include <span>
#include <vector>

#include "gdof/core.hpp"

namespace gdof {

inline constexpr double kDefaultBudgetStep = 0.01;

struct BudgetAllocation {
    Mat2 beta{};         // witness allocation
    double total = 0;    // sum of the four entries
    double achieved = 0; // sum GDoF under the witness
};

// Grid search over equal within-row splits (b_k1 = b_k2 = x_k). The sum GDoF
// depends on beta only through the row minima, so an unequal split never
// beats the equal split of the same row minimum at lower cost. Among optimal
// allocations the lexicographically smallest (x1, x2) wins.
BudgetAllocation optimize_allocation(const Mat2& alpha, double budget, double step = kDefaultBudgetStep);

struct BudgetPoint {
    double budget = 0;
    double d_sum = 0;
    Mat2 beta{};
};

struct BudgetCurve {
    std::vector<BudgetPoint> points;
    std::vector<double> breakpoints;
};

// budgets must be ascending. Breakpoints are the budgets where the slope of
// the curve's concave majorant changes by more than 10 * step; taking the
// majorant first removes the staircase left by grid quantization.
BudgetCurve budget_curve(const Mat2& alpha, std::span<const double> budgets, double step = kDefaultBudgetStep);

std::vector<double> detect_breakpoints(std::span<const BudgetPoint> points, double threshold);

// Simplified sum GDoF when antenna 1 strictly prefers user 1 and antenna 2
// strictly prefers user 2. Throws std::domain_error otherwise.
double different_preference_gdof(const Mat2& alpha, double beta1, double beta2);

// alpha11 + alpha22 - max(alpha12 - beta1, alpha21 - beta2), valid when both
// direct links dominate both cross links (on top of the strict preferences).
double direct_dominant_gdof(const Mat2& alpha, double beta1, double beta2);

} // namespace gdof

#endif
