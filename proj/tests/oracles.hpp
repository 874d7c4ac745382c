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

#ifndef GDOF_TESTS_ORACLES_HPP
#define GDOF_TESTS_ORACLES_HPP

// Reference implementations used only by the tests. They are deliberately
// written from the definitions, without sharing code with the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

using M2 = std::array<std::array<double, 2>, 2>;

inline double plus(double x) { return x > 0 ? x : 0; }

// Sum GDoF straight from the two-user theorem statement.
inline double sum_gdof(const M2& a, const M2& b)
{
    const double b1 = std::min(b[0][0], b[0][1]);
    const double b2 = std::min(b[1][0], b[1][1]);
    const double d1 = std::max(a[0][0], a[0][1]) +
                      std::max({a[1][0] - a[0][0] + b1, a[1][1] - a[0][1] + b1, 0.0});
    const double d2 = std::max(a[1][0], a[1][1]) +
                      std::max({a[0][0] - a[1][0] + b2, a[0][1] - a[1][1] + b2, 0.0});
    return std::min(d1, d2);
}

// Finite-precision specialization (all CSIT exponents zero).
inline double sum_gdof_no_csit(const M2& a)
{
    const double d1 = std::max(a[0][0], a[0][1]) + std::max(plus(a[1][0] - a[0][0]), plus(a[1][1] - a[0][1]));
    const double d2 = std::max(a[1][0], a[1][1]) + std::max(plus(a[0][0] - a[1][0]), plus(a[0][1] - a[1][1]));
    return std::min(d1, d2);
}

// Grid points {0, s, 2s, ...} below cap, with cap itself appended.
inline std::vector<double> grid_to(double cap, double step)
{
    std::vector<double> g;
    for (int i = 0;; ++i) {
        const double v = i * step;
        if (v > cap + 1e-9)
            break;
        g.push_back(std::min(v, cap));
    }
    if (cap - g.back() > 1e-12)
        g.push_back(cap);
    return g;
}

// Exhaustive search over all four CSIT exponents.
inline double best_allocation_4d(const M2& a, double budget, double step)
{
    const auto g11 = grid_to(a[0][0], step), g12 = grid_to(a[0][1], step);
    const auto g21 = grid_to(a[1][0], step), g22 = grid_to(a[1][1], step);
    double best = -1;
    for (double x11 : g11)
        for (double x12 : g12)
            for (double x21 : g21)
                for (double x22 : g22) {
                    if (x11 + x12 + x21 + x22 > budget + 1e-9)
                        continue;
                    best = std::max(best, sum_gdof(a, M2{{{x11, x12}, {x21, x22}}}));
                }
    return best;
}

// Aligned-image-set mean size by sorting all codewords on (Y1, x1, x2) and
// grouping representatives by Y2 through a second sort.
struct Outputs {
    std::int64_t y1, y2;
};

template <class F>
double mean_set_size_sorted(std::int64_t x1_max, std::int64_t x2_max, F&& outputs)
{
    struct Row {
        std::int64_t y1, x1, x2, y2;
    };
    std::vector<Row> rows;
    for (std::int64_t x1 = 0; x1 <= x1_max; ++x1)
        for (std::int64_t x2 = 0; x2 <= x2_max; ++x2) {
            const Outputs o = outputs(x1, x2);
            rows.push_back({o.y1, x1, x2, o.y2});
        }
    std::sort(rows.begin(), rows.end(), [](const Row& p, const Row& q) {
        return std::tie(p.y1, p.x1, p.x2) < std::tie(q.y1, q.x1, q.x2);
    });
    std::vector<std::int64_t> rep_y2;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (i == 0 || rows[i].y1 != rows[i - 1].y1)
            rep_y2.push_back(rows[i].y2);
    std::sort(rep_y2.begin(), rep_y2.end());
    double squares = 0;
    for (std::size_t i = 0; i < rep_y2.size();) {
        std::size_t j = i;
        while (j < rep_y2.size() && rep_y2[j] == rep_y2[i])
            ++j;
        squares += static_cast<double>(j - i) * static_cast<double>(j - i);
        i = j;
    }
    return squares / static_cast<double>(rep_y2.size());
}

} // namespace oracle

#endif
