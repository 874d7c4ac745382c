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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "gdof/budget.hpp"
#include "oracles.hpp"

using namespace gdof;

namespace {

Mat2 sq(double a11, double a12, double a21, double a22) { return {{{a11, a12}, {a21, a22}}}; }

std::vector<double> budgets_to(double hi, double step)
{
    std::vector<double> b;
    for (int i = 0; i * step <= hi + 1e-9; ++i)
        b.push_back(i * step);
    return b;
}

} // namespace

TEST_SUITE("budget")
{
    TEST_CASE("zero budget gives the finite-precision value")
    {
        const Mat2 a = sq(1, 0.6, 0.4, 1);
        const auto r = optimize_allocation(a, 0.0);
        CHECK(r.total == 0.0);
        CHECK(r.achieved == oracle::sum_gdof_no_csit(a));
    }

    TEST_CASE("witness is feasible and achieves the reported value")
    {
        Rng rng(17);
        for (int i = 0; i < 200; ++i) {
            Mat2 a{};
            for (auto& row : a)
                for (auto& v : row)
                    v = rng.uniform(0, 1.5);
            const double budget = rng.uniform(0, 4);
            const auto r = optimize_allocation(a, budget, 0.05);
            double total = 0;
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    CHECK(r.beta[k][l] >= 0.0);
                    CHECK(r.beta[k][l] <= a[k][l]);
                    total += r.beta[k][l];
                }
            CHECK(total <= budget + 1e-9);
            CHECK(r.total == doctest::Approx(total));
            CHECK(r.achieved == oracle::sum_gdof(a, r.beta));
        }
    }

    TEST_CASE("reduced search equals the exhaustive search on grid-aligned strengths")
    {
        Rng rng(23);
        for (int i = 0; i < 40; ++i) {
            Mat2 a{};
            for (auto& row : a)
                for (auto& v : row)
                    v = static_cast<double>(rng.below(11)) / 10.0;
            for (double budget : {0.0, 0.3, 0.8, 1.5, 2.6}) {
                const auto r = optimize_allocation(a, budget, 0.1);
                CHECK(r.achieved == doctest::Approx(oracle::best_allocation_4d(a, budget, 0.1)).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("all-ones curve follows 1 + B/4 until saturation")
    {
        const auto budgets = budgets_to(5.0, 0.05);
        const auto curve = budget_curve(sq(1, 1, 1, 1), budgets);
        for (const auto& p : curve.points) {
            const double expect = 1.0 + std::min(p.budget, 4.0) / 4.0;
            CHECK(p.d_sum <= expect + 1e-12);
            CHECK(p.d_sum >= expect - kDefaultBudgetStep - 1e-12);
        }
    }

    TEST_CASE("different-preference curve bends at twice the strength gap")
    {
        const Mat2 a = sq(1, 0.6, 0.4, 1);
        const auto curve = budget_curve(a, budgets_to(4.0, 0.01));
        REQUIRE(!curve.breakpoints.empty());
        CHECK(std::abs(curve.breakpoints.front() - 2.0 * (a[0][1] - a[1][0])) <= 0.01 + 1e-12);
        for (const auto& p : curve.points) {
            const double expect = p.budget <= 0.4 ? 1.4 + p.budget / 2 : std::min(2.0, 1.5 + p.budget / 4);
            CHECK(std::abs(p.d_sum - expect) <= 0.01 + 1e-12);
        }
    }

    TEST_CASE("curve is nondecreasing in the budget")
    {
        const auto curve = budget_curve(sq(0.9, 0.3, 0.7, 1.2), budgets_to(3.0, 0.1), 0.02);
        for (std::size_t i = 1; i < curve.points.size(); ++i)
            CHECK(curve.points[i].d_sum >= curve.points[i - 1].d_sum);
    }

    TEST_CASE("regime formulas match the theorem")
    {
        const Mat2 a = sq(1, 0.6, 0.4, 1);
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; j <= 4; ++j) {
                const double b1 = i * 0.1, b2 = j * 0.1;
                const Mat2 beta = sq(b1, b1, b2, b2);
                CHECK(different_preference_gdof(a, b1, b2) == doctest::Approx(oracle::sum_gdof(a, beta)).epsilon(1e-12));
                CHECK(direct_dominant_gdof(a, b1, b2) == doctest::Approx(oracle::sum_gdof(a, beta)).epsilon(1e-12));
            }
        CHECK_THROWS_AS(different_preference_gdof(sq(1, 1, 0.4, 0.5), 0, 0), std::domain_error);
        CHECK_THROWS_AS(direct_dominant_gdof(sq(0.5, 0.6, 0.4, 1), 0, 0), std::domain_error);
    }

    TEST_CASE("input checks")
    {
        CHECK_THROWS(optimize_allocation(sq(1, 1, 1, 1), -0.1));
        CHECK_THROWS(optimize_allocation(sq(1, 1, 1, 1), 1.0, 0.0));
        CHECK_THROWS_AS(optimize_allocation(sq(-1, 1, 1, 1), 1.0), SpecError);
        const std::vector<double> bad{0.5, 0.2};
        CHECK_THROWS(budget_curve(sq(1, 1, 1, 1), bad));
    }
}
