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

#include "gdof/ais.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "gdof/parallel.hpp"
#include "gdof/random.hpp"
#include "gdof/stats.hpp"

namespace gdof {

namespace {

// ceil(p^e), snapping values that are integers up to rounding error.
std::int64_t ceil_power(double p, double e)
{
    const double v = std::pow(p, e);
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, r))
        return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::ceil(v));
}

double row_max(const Mat2& a, int k) { return std::max(a[k][0], a[k][1]); }

// Down-scaled coefficient P_bar^{a_kl - max_k} G_kl.
double scaled(const DeterministicInstance& inst, const Eigen::MatrixXd& g, int k, int l)
{
    return std::pow(inst.p_bar, inst.alpha[k][l] - row_max(inst.alpha, k)) * g(k, l);
}

void check_channel(const Eigen::MatrixXd& g)
{
    if (g.rows() != 2 || g.cols() != 2)
        throw std::invalid_argument("deterministic model needs a 2x2 coefficient matrix");
}

void check_input(std::int64_t x1, std::int64_t x2, const DeterministicInstance& inst)
{
    if (x1 < 0 || x1 > inst.x1_max || x2 < 0 || x2 > inst.x2_max)
        throw std::invalid_argument("codeword (" + std::to_string(x1) + "," + std::to_string(x2) +
                                    ") is outside the input alphabet");
}

std::int64_t floor_term(double c, std::int64_t x) { return static_cast<std::int64_t>(std::floor(c * static_cast<double>(x))); }

// Per-input quantized terms floor(c * x) for x = 0..n.
std::vector<std::int64_t> term_table(double c, std::int64_t n)
{
    std::vector<std::int64_t> t(static_cast<std::size_t>(n + 1));
    for (std::int64_t x = 0; x <= n; ++x)
        t[static_cast<std::size_t>(x)] = floor_term(c, x);
    return t;
}

} // namespace

DeterministicInstance DeterministicInstance::make(const ChannelSpec2& spec, double p_bar)
{
    if (!(p_bar > 1.0) || !std::isfinite(p_bar))
        throw std::invalid_argument("p_bar must be finite and > 1");
    DeterministicInstance inst;
    inst.p_bar = p_bar;
    inst.alpha = spec.alpha();
    inst.beta = spec.beta();
    inst.x1_max = ceil_power(p_bar, row_max(inst.alpha, 0));
    inst.x2_max = ceil_power(p_bar, row_max(inst.alpha, 1));
    return inst;
}

std::uint64_t DeterministicInstance::alphabet_size() const
{
    return static_cast<std::uint64_t>(x1_max + 1) * static_cast<std::uint64_t>(x2_max + 1);
}

Eigen::MatrixXd draw_deterministic_channel(const DeterministicInstance& inst, const BoundedDensitySpec& density,
                                           Rng& rng)
{
    // P_bar^{-beta} = P^{-beta/2} with P = P_bar^2.
    const double P = inst.p_bar * inst.p_bar;
    return draw_channel(to_matrix(inst.beta), density, P, rng).coefficients();
}

OutputPair deterministic_outputs(std::int64_t x1, std::int64_t x2, const Eigen::MatrixXd& g,
                                 const DeterministicInstance& inst)
{
    check_channel(g);
    check_input(x1, x2, inst);
    return {floor_term(scaled(inst, g, 0, 0), x1) + floor_term(scaled(inst, g, 0, 1), x2),
            floor_term(scaled(inst, g, 1, 0), x1) + floor_term(scaled(inst, g, 1, 1), x2)};
}

namespace {

void check_pair(const CodewordPair& p, const DeterministicInstance& inst)
{
    check_input(p.lambda1, p.lambda2, inst);
    check_input(p.nu1, p.nu2, inst);
    if (p.lambda1 == p.nu1 && p.lambda2 == p.nu2)
        throw std::invalid_argument("codeword pair must consist of two distinct codewords");
}

} // namespace

AlignmentEstimate alignment_probability_mc(const CodewordPair& pair, const DeterministicInstance& inst,
                                           const BoundedDensitySpec& density, int trials, std::uint64_t seed,
                                           unsigned workers)
{
    check_pair(pair, inst);
    if (trials < 1)
        throw std::invalid_argument("alignment_probability_mc: trials must be >= 1");

    Rng est_rng = Rng::stream(seed, {0});
    Eigen::MatrixXd g_hat(2, 2);
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            g_hat(k, l) = density.sample_estimate(est_rng);

    std::vector<char> hit(static_cast<std::size_t>(trials), 0);
    parallel_for(
        hit.size(),
        [&](std::size_t t) {
            Rng rng = Rng::stream(seed, {1, static_cast<std::uint64_t>(t)});
            Eigen::MatrixXd g = g_hat;
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    g(k, l) += std::pow(inst.p_bar, -inst.beta[k][l]) * density.sample_error(rng);
            const OutputPair a = deterministic_outputs(pair.lambda1, pair.lambda2, g, inst);
            const OutputPair b = deterministic_outputs(pair.nu1, pair.nu2, g, inst);
            hit[t] = a.y2 == b.y2 ? 1 : 0;
        },
        workers);

    AlignmentEstimate out;
    out.trials = trials;
    out.aligned = static_cast<int>(std::count(hit.begin(), hit.end(), 1));
    out.estimate = static_cast<double>(out.aligned) / trials;

    const double top = row_max(inst.alpha, 1);
    auto coord_bound = [&](int l, std::int64_t diff) {
        if (diff == 0)
            return std::numeric_limits<double>::quiet_NaN();
        return 4.0 * density.f_max() * std::pow(inst.p_bar, inst.beta[1][l]) /
               (std::pow(inst.p_bar, inst.alpha[1][l] - top) * static_cast<double>(std::llabs(diff)));
    };
    const double b1 = coord_bound(0, pair.nu1 - pair.lambda1);
    const double b2 = coord_bound(1, pair.nu2 - pair.lambda2);
    if (pair.nu1 != pair.lambda1) {
        out.bound = b1;
        out.other_bound = b2;
    } else {
        out.bound = b2;
        out.other_bound = b1;
    }
    const double pb = std::min(1.0, out.bound);
    out.sigma = std::sqrt(pb * (1.0 - pb) / trials);
    out.pass = out.estimate <= pb + 3.0 * out.sigma;
    return out;
}

bool interval_condition_check(const CodewordPair& pair, const DeterministicInstance& inst,
                              const Eigen::MatrixXd& g, const BoundedDensitySpec& density)
{
    const OutputPair a = deterministic_outputs(pair.lambda1, pair.lambda2, g, inst);
    const OutputPair b = deterministic_outputs(pair.nu1, pair.nu2, g, inst);
    if (a.y2 != b.y2)
        return true;
    // |G| may exceed the family's delta2 by the error half-width; use the
    // realized coefficient bound so the inequalities remain valid.
    const double lo = density.delta1();
    const double hi = density.coefficient_bound();
    const double top = row_max(inst.alpha, 1);
    const double s1 = std::pow(inst.p_bar, inst.alpha[1][0] - top);
    const double s2 = std::pow(inst.p_bar, inst.alpha[1][1] - top);
    const auto d1 = static_cast<double>(std::llabs(pair.nu1 - pair.lambda1));
    const auto d2 = static_cast<double>(std::llabs(pair.nu2 - pair.lambda2));
    const double tol = 1e-9 * (1.0 + s1 * hi * d1 + s2 * hi * d2);
    return s1 * lo * d1 <= s2 * hi * d2 + 2.0 + tol && s2 * lo * d2 <= s1 * hi * d1 + 2.0 + tol;
}

EnumerationCapExceeded::EnumerationCapExceeded(std::uint64_t required, std::uint64_t cap)
    : std::length_error("enumeration needs " + std::to_string(required) + " codeword pairs but the cap is " +
                        std::to_string(cap) + "; raise the cap to at least " + std::to_string(required) +
                        " or lower p_bar"),
      required_(required), cap_(cap)
{
}

std::vector<Representative> image_representatives(const DeterministicInstance& inst, const Eigen::MatrixXd& g,
                                                  std::uint64_t cap, unsigned workers)
{
    check_channel(g);
    if (inst.x1_max < 0 || inst.x2_max < 0)
        throw std::invalid_argument("input alphabet bounds must be nonnegative");
    const std::uint64_t need = inst.alphabet_size();
    if (need > cap)
        throw EnumerationCapExceeded(need, cap);

    const auto t11 = term_table(scaled(inst, g, 0, 0), inst.x1_max);
    const auto t12 = term_table(scaled(inst, g, 0, 1), inst.x2_max);
    const auto t21 = term_table(scaled(inst, g, 1, 0), inst.x1_max);
    const auto t22 = term_table(scaled(inst, g, 1, 1), inst.x2_max);

    const auto [lo11, hi11] = std::minmax_element(t11.begin(), t11.end());
    const auto [lo12, hi12] = std::minmax_element(t12.begin(), t12.end());
    const std::int64_t y_lo = *lo11 + *lo12;
    const auto range = static_cast<std::size_t>(*hi11 + *hi12 - y_lo + 1);

    // Each chunk covers a contiguous block of x1 and records the first
    // codeword reaching every image; merging in chunk order keeps the
    // lexicographically smallest one.
    const auto n1 = static_cast<std::size_t>(inst.x1_max + 1);
    const std::size_t chunks = std::min<std::size_t>(n1, 16);
    const std::int64_t stride = inst.x2_max + 1;
    std::vector<std::vector<std::int64_t>> first(chunks);
    parallel_for(
        chunks,
        [&](std::size_t c) {
            auto& seen = first[c];
            seen.assign(range, -1);
            const std::size_t begin = c * n1 / chunks;
            const std::size_t end = (c + 1) * n1 / chunks;
            for (std::size_t x1 = begin; x1 < end; ++x1)
                for (std::size_t x2 = 0; x2 < t12.size(); ++x2) {
                    auto& slot = seen[static_cast<std::size_t>(t11[x1] + t12[x2] - y_lo)];
                    if (slot < 0)
                        slot = static_cast<std::int64_t>(x1) * stride + static_cast<std::int64_t>(x2);
                }
        },
        workers);

    std::vector<Representative> reps;
    for (std::size_t y = 0; y < range; ++y) {
        for (const auto& seen : first) {
            if (seen[y] < 0)
                continue;
            Representative r;
            r.x1 = seen[y] / stride;
            r.x2 = seen[y] % stride;
            r.y.y1 = y_lo + static_cast<std::int64_t>(y);
            r.y.y2 = t21[static_cast<std::size_t>(r.x1)] + t22[static_cast<std::size_t>(r.x2)];
            reps.push_back(r);
            break;
        }
    }
    return reps;
}

ImageSetEnumeration image_set_sizes(const DeterministicInstance& inst, const Eigen::MatrixXd& g,
                                    std::uint64_t cap, unsigned workers)
{
    const auto reps = image_representatives(inst, g, cap, workers);
    std::unordered_map<std::int64_t, std::uint64_t> groups;
    for (const auto& r : reps)
        ++groups[r.y.y2];

    ImageSetEnumeration out;
    out.codewords = inst.alphabet_size();
    out.distinct_images = reps.size();
    double squares = 0;
    for (const auto& [image, size] : groups) {
        out.group_sizes.push_back(size);
        squares += static_cast<double>(size) * static_cast<double>(size);
    }
    std::sort(out.group_sizes.begin(), out.group_sizes.end());
    out.mean_size = squares / static_cast<double>(reps.size());
    return out;
}

IntervalAudit audit_interval_conditions(const DeterministicInstance& inst, const Eigen::MatrixXd& g,
                                        const BoundedDensitySpec& density, std::uint64_t max_pairs,
                                        std::uint64_t cap)
{
    auto reps = image_representatives(inst, g, cap, 1);
    std::stable_sort(reps.begin(), reps.end(),
                     [](const Representative& a, const Representative& b) { return a.y.y2 < b.y.y2; });
    IntervalAudit audit;
    for (std::size_t i = 0; i < reps.size() && audit.aligned_pairs < max_pairs; ++i)
        for (std::size_t j = i + 1; j < reps.size() && reps[j].y.y2 == reps[i].y.y2; ++j) {
            if (audit.aligned_pairs >= max_pairs)
                break;
            const CodewordPair pair{reps[i].x1, reps[i].x2, reps[j].x1, reps[j].x2};
            ++audit.aligned_pairs;
            if (interval_condition_check(pair, inst, g, density))
                ++audit.passed;
        }
    return audit;
}

double image_set_bound_exponent(const ChannelSpec2& spec)
{
    const Mat2& a = spec.alpha();
    const double beta2 = effective_csit(spec.beta()).beta2;
    return std::max(std::max(a[0][0] - a[1][0], a[0][1] - a[1][1]) + beta2, 0.0);
}

ImageSetStats expected_size_curve(const ChannelSpec2& spec, const std::vector<double>& p_bar_grid, int draws,
                                  std::uint64_t seed, const BoundedDensitySpec& density, std::uint64_t cap,
                                  double slack, unsigned workers)
{
    if (p_bar_grid.size() < 2)
        throw std::invalid_argument("expected_size_curve: p_bar grid needs at least two points");
    for (std::size_t i = 1; i < p_bar_grid.size(); ++i)
        if (!(p_bar_grid[i] > p_bar_grid[i - 1]))
            throw std::invalid_argument("expected_size_curve: p_bar grid must be strictly ascending");
    if (std::log2(p_bar_grid.back() / p_bar_grid.front()) < 3.0 - 1e-9)
        throw std::invalid_argument("expected_size_curve: p_bar grid must span at least three octaves");
    if (draws < 1)
        throw std::invalid_argument("expected_size_curve: draws must be >= 1");

    std::vector<DeterministicInstance> instances;
    for (double pb : p_bar_grid) {
        instances.push_back(DeterministicInstance::make(spec, pb));
        if (instances.back().alphabet_size() > cap)
            throw EnumerationCapExceeded(instances.back().alphabet_size(), cap);
    }

    const std::size_t np = p_bar_grid.size();
    const auto nd = static_cast<std::size_t>(draws);
    std::vector<double> sizes(np * nd);
    parallel_for(
        sizes.size(),
        [&](std::size_t idx) {
            const std::size_t i = idx / nd;
            const std::size_t d = idx % nd;
            Rng rng = Rng::stream(seed, {static_cast<std::uint64_t>(d)});
            const Eigen::MatrixXd g = draw_deterministic_channel(instances[i], density, rng);
            sizes[idx] = image_set_sizes(instances[i], g, cap, 1).mean_size;
        },
        workers);

    ImageSetStats stats;
    stats.p_bar_grid = p_bar_grid;
    stats.draws = draws;
    stats.slack = slack;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < np; ++i) {
        const double mean = std::accumulate(sizes.begin() + static_cast<std::ptrdiff_t>(i * nd),
                                            sizes.begin() + static_cast<std::ptrdiff_t>((i + 1) * nd), 0.0) /
                            static_cast<double>(nd);
        stats.mean_size.push_back(mean);
        lx.push_back(std::log(p_bar_grid[i]));
        ly.push_back(std::log(mean));
    }
    stats.fitted_exponent = ls_slope(lx, ly);
    stats.bound_exponent = image_set_bound_exponent(spec);
    stats.pass = stats.fitted_exponent <= stats.bound_exponent + slack;
    return stats;
}

} // namespace gdof
