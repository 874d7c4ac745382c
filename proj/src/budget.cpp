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

#include "gdof/budget.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gdof {

namespace {

constexpr double kCostSlack = 1e-9;
constexpr double kValueSlack = 1e-12;

// 0, step, 2 step, ... up to cap, with cap itself appended when it is off-grid.
std::vector<double> axis(double cap, double step)
{
    std::vector<double> xs;
    const auto n = static_cast<long>(std::floor(cap / step + 1e-9));
    xs.reserve(static_cast<std::size_t>(n) + 2);
    for (long i = 0; i <= n; ++i)
        xs.push_back(std::min(static_cast<double>(i) * step, cap));
    if (cap - xs.back() > 1e-12)
        xs.push_back(cap);
    return xs;
}

double pos(double x) { return std::max(x, 0.0); }

} // namespace

BudgetAllocation optimize_allocation(const Mat2& alpha, double budget, double step)
{
    const ChannelSpec2 check(alpha, Mat2{});
    if (!(budget >= 0.0) || !std::isfinite(budget))
        throw std::invalid_argument("optimize_allocation: budget must be finite and >= 0");
    if (!(step > 0.0) || !std::isfinite(step))
        throw std::invalid_argument("optimize_allocation: step must be positive");

    const double cap1 = std::min(alpha[0][0], alpha[0][1]);
    const double cap2 = std::min(alpha[1][0], alpha[1][1]);
    const auto xs1 = axis(cap1, step);
    const auto xs2 = axis(cap2, step);

    double best = -1.0;
    double best_x1 = 0.0;
    double best_x2 = 0.0;
    for (double x1 : xs1) {
        if (2.0 * x1 > budget + kCostSlack)
            break;
        const double d1 = bound_d1(alpha, x1);
        for (double x2 : xs2) {
            if (2.0 * x1 + 2.0 * x2 > budget + kCostSlack)
                break;
            const double d = std::min(d1, bound_d2(alpha, x2));
            if (d > best + kValueSlack) {
                best = d;
                best_x1 = x1;
                best_x2 = x2;
            }
        }
    }

    BudgetAllocation out;
    out.beta = {{{best_x1, best_x1}, {best_x2, best_x2}}};
    out.total = 2.0 * best_x1 + 2.0 * best_x2;
    out.achieved = best;
    return out;
}

std::vector<double> detect_breakpoints(std::span<const BudgetPoint> points, double threshold)
{
    // Upper concave hull (monotone chain, left to right).
    std::vector<std::size_t> hull;
    auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
        const double ax = points[a].budget - points[o].budget;
        const double ay = points[a].d_sum - points[o].d_sum;
        const double bx = points[b].budget - points[o].budget;
        const double by = points[b].d_sum - points[o].d_sum;
        return ax * by - ay * bx;
    };
    for (std::size_t i = 0; i < points.size(); ++i) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) >= -1e-12)
            hull.pop_back();
        hull.push_back(i);
    }

    std::vector<double> out;
    for (std::size_t h = 1; h + 1 < hull.size(); ++h) {
        const auto& l = points[hull[h - 1]];
        const auto& m = points[hull[h]];
        const auto& r = points[hull[h + 1]];
        const double left = (m.d_sum - l.d_sum) / (m.budget - l.budget);
        const double right = (r.d_sum - m.d_sum) / (r.budget - m.budget);
        if (std::abs(left - right) > threshold)
            out.push_back(m.budget);
    }
    return out;
}

BudgetCurve budget_curve(const Mat2& alpha, std::span<const double> budgets, double step)
{
    for (std::size_t i = 1; i < budgets.size(); ++i)
        if (!(budgets[i] > budgets[i - 1]))
            throw std::invalid_argument("budget_curve: budgets must be strictly ascending");

    BudgetCurve curve;
    curve.points.reserve(budgets.size());
    for (double b : budgets) {
        const auto alloc = optimize_allocation(alpha, b, step);
        curve.points.push_back({b, alloc.achieved, alloc.beta});
    }
    curve.breakpoints = detect_breakpoints(curve.points, 10.0 * step);
    return curve;
}

double different_preference_gdof(const Mat2& a, double beta1, double beta2)
{
    if (!(a[0][0] > a[1][0] && a[1][1] > a[0][1]))
        throw std::domain_error("different_preference_gdof: requires alpha11 > alpha21 and alpha22 > alpha12");
    return std::min(a[1][1] + pos(a[0][0] - a[0][1]) + beta1, a[0][0] + pos(a[1][1] - a[1][0]) + beta2);
}

double direct_dominant_gdof(const Mat2& a, double beta1, double beta2)
{
    if (!(a[0][0] > a[1][0] && a[1][1] > a[0][1]))
        throw std::domain_error("direct_dominant_gdof: requires alpha11 > alpha21 and alpha22 > alpha12");
    if (!(std::min(a[0][0], a[1][1]) >= std::max(a[0][1], a[1][0])))
        throw std::domain_error("direct_dominant_gdof: requires min(alpha11, alpha22) >= max(alpha12, alpha21)");
    return a[0][0] + a[1][1] - std::max(a[0][1] - beta1, a[1][0] - beta2);
}

} // namespace gdof
