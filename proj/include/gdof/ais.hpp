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

#ifndef GDOF_AIS_HPP
#define GDOF_AIS_HPP

// Deterministic-model laboratory for the aligned-image-set outer bound.
// Exponents in this module are in units of P_bar = sqrt(P): a coefficient
// with CSIT exponent beta is G = G_hat + P_bar^{-beta} G_tilde.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "gdof/core.hpp"

namespace gdof {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;
inline constexpr double kExponentSlack = 0.15;

struct DeterministicInstance {
    double p_bar = 0;
    Mat2 alpha{};
    Mat2 beta{};
    std::int64_t x1_max = 0;
    std::int64_t x2_max = 0;

    // Input ranges ceil(P_bar^{max row-1 alpha}) and ceil(P_bar^{max row-2 alpha}).
    static DeterministicInstance make(const ChannelSpec2& spec, double p_bar);

    std::uint64_t alphabet_size() const;
};

struct OutputPair {
    std::int64_t y1 = 0;
    std::int64_t y2 = 0;
    bool operator==(const OutputPair&) const = default;
};

struct CodewordPair {
    std::int64_t lambda1 = 0, lambda2 = 0;
    std::int64_t nu1 = 0, nu2 = 0;
};

// Effective coefficients G = G_hat + P_bar^{-beta} G_tilde for one channel use.
Eigen::MatrixXd draw_deterministic_channel(const DeterministicInstance& inst, const BoundedDensitySpec& density,
                                           Rng& rng);

// Y_k = floor(P_bar^{a_k1 - max_k} G_k1 x1) + floor(P_bar^{a_k2 - max_k} G_k2 x2).
OutputPair deterministic_outputs(std::int64_t x1, std::int64_t x2, const Eigen::MatrixXd& g,
                                 const DeterministicInstance& inst);

struct AlignmentEstimate {
    int trials = 0;
    int aligned = 0;
    double estimate = 0;
    double bound = 0;       // bound for the coordinate that drives the argument
    double other_bound = 0; // the remaining coordinate, NaN when its difference is zero
    double sigma = 0;       // binomial spread at min(1, bound)
    bool pass = false;
};

// Frequency with which the two codewords collide at receiver 2 when G_hat is
// held fixed and only G_tilde varies.
AlignmentEstimate alignment_probability_mc(const CodewordPair& pair, const DeterministicInstance& inst,
                                           const BoundedDensitySpec& density, int trials, std::uint64_t seed,
                                           unsigned workers = 0);

// The two interval inequalities any receiver-2-aligned pair must satisfy.
// Returns true for pairs that are not aligned under g.
bool interval_condition_check(const CodewordPair& pair, const DeterministicInstance& inst,
                              const Eigen::MatrixXd& g, const BoundedDensitySpec& density);

class EnumerationCapExceeded : public std::length_error {
  public:
    EnumerationCapExceeded(std::uint64_t required, std::uint64_t cap);
    std::uint64_t required() const noexcept { return required_; }
    std::uint64_t cap() const noexcept { return cap_; }

  private:
    std::uint64_t required_;
    std::uint64_t cap_;
};

struct Representative {
    std::int64_t x1 = 0;
    std::int64_t x2 = 0;
    OutputPair y;
};

// Lexicographically smallest preimage of every distinct receiver-1 image,
// ordered by that image.
std::vector<Representative> image_representatives(const DeterministicInstance& inst, const Eigen::MatrixXd& g,
                                                  std::uint64_t cap = kDefaultEnumerationCap,
                                                  unsigned workers = 0);

struct ImageSetEnumeration {
    std::uint64_t codewords = 0;       // size of the input alphabet
    std::uint64_t distinct_images = 0; // distinct receiver-1 images
    std::vector<std::uint64_t> group_sizes; // one entry per receiver-2 image, ascending
    double mean_size = 0;                   // average |S_nu| over representatives nu
};

ImageSetEnumeration image_set_sizes(const DeterministicInstance& inst, const Eigen::MatrixXd& g,
                                    std::uint64_t cap = kDefaultEnumerationCap, unsigned workers = 0);

struct IntervalAudit {
    std::uint64_t aligned_pairs = 0;
    std::uint64_t passed = 0;
};

// Runs interval_condition_check on distinct representatives sharing a
// receiver-2 image, stopping after max_pairs pairs.
IntervalAudit audit_interval_conditions(const DeterministicInstance& inst, const Eigen::MatrixXd& g,
                                        const BoundedDensitySpec& density, std::uint64_t max_pairs,
                                        std::uint64_t cap = kDefaultEnumerationCap);

struct ImageSetStats {
    std::vector<double> p_bar_grid;
    std::vector<double> mean_size;
    int draws = 0;
    double fitted_exponent = 0;
    double bound_exponent = 0;
    double slack = kExponentSlack;
    bool pass = false;
};

// (max(a11 - a21, a12 - a22) + beta_2)^+ with beta_2 the receiver-2 row minimum.
double image_set_bound_exponent(const ChannelSpec2& spec);

ImageSetStats expected_size_curve(const ChannelSpec2& spec, const std::vector<double>& p_bar_grid, int draws,
                                  std::uint64_t seed, const BoundedDensitySpec& density,
                                  std::uint64_t cap = kDefaultEnumerationCap, double slack = kExponentSlack,
                                  unsigned workers = 0);

} // namespace gdof

#endif
