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

#ifndef GDOF_SCHEME_HPP
#define GDOF_SCHEME_HPP

// Layered zero-forcing / rate-splitting transmission plans that reach the
// sum GDoF, and a finite-SNR simulator that measures SINR exponents and rate
// slopes of those plans under partial CSIT.
//
// Layouts live in normalized coordinates (alpha11 is the largest strength);
// SchemeLayout::transform maps back to the caller's user/antenna labels.
// Simulation results are reported in the caller's labels.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gdof/core.hpp"

namespace gdof {

enum class SchemeCase { Case1, Case2, Case3, KUserSymmetric, SingleUser };
std::string_view to_string(SchemeCase c);

// User swap (rows) and/or antenna swap (columns). Both are involutions and
// commute, so a transform is its own inverse.
struct Transform {
    bool swap_users = false;
    bool swap_antennas = false;

    Mat2 apply(const Mat2& m) const;
    ChannelSpec2 apply(const ChannelSpec2& spec) const;
    Eigen::MatrixXd apply(const Eigen::MatrixXd& m) const;
    int user(int index) const { return swap_users ? 1 - index : index; }
    bool is_identity() const { return !swap_users && !swap_antennas; }
    bool operator==(const Transform&) const = default;
};

// Moves the largest strength to (1,1). Candidates are tried in the order
// identity, user swap, antenna swap, both; the first that works is returned.
std::pair<ChannelSpec2, Transform> normalize_instance(const ChannelSpec2& spec);

enum class MessageKind { Wc, W1z, W1p, W2z, Wtop, Wkp };

struct MessageId {
    MessageKind kind = MessageKind::Wc;
    int user = 0; // 0-based, only meaningful for Wkp
    std::string name() const;
};

enum class PrecoderKind {
    Generic,         // all-ones direction
    AntennaOne,      // antenna 1 only
    ZeroForceUser,   // orthogonal to the estimated row of `user`
    ZeroForceAllBut, // orthogonal to every estimated row except `user`
};

struct PrecoderRule {
    PrecoderKind kind = PrecoderKind::Generic;
    int user = -1;
    std::string name() const;
};

struct DecodeStep {
    int receiver = 0;
    int rank = 0; // 1 = decoded first
};

// Power exponent the layer is designed to leave at a receiver that zero-forces it.
struct DesignedLeakage {
    int receiver = 0;
    double exponent = 0;
};

struct LayerSpec {
    MessageId message;
    int owner = 0;
    double gdof_load = 0;
    // Amplitude is sqrt(P^power_exponent), times sqrt(1 - P^complement_exponent) when set.
    double power_exponent = 0;
    std::optional<double> complement_exponent;
    PrecoderRule precoder;
    // Antenna 1 of this layer is attenuated by sqrt(P^-reduction).
    bool reduced = false;
    std::vector<DecodeStep> decoded_by;
    std::vector<DesignedLeakage> leakage;
};

struct SchemeLayout {
    SchemeCase case_id = SchemeCase::Case3;
    int users = 2;
    Transform transform;
    Eigen::MatrixXd alpha; // normalized strengths
    Eigen::MatrixXd beta;  // CSIT levels the design assumes (row minima, normalized)
    double reduction = 0;  // top-layer GDoF stripped onto antenna 1
    double m = 0;
    std::vector<LayerSpec> layers;
    std::vector<double> target; // normalized user order

    std::vector<double> original_target() const;
    double total_target() const;
};

SchemeLayout build_layout(const ChannelSpec2& spec);
SchemeLayout build_layout_k(const SymmetricSpecK& spec);

class PowerConstraintViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SimOptions {
    double max_condition = 1e8;      // K-user realizations above this are redrawn
    int max_redraws = 1000;          // per trial
    double power_tolerance = 1e-6;   // per-antenna average power limit is 1 + tolerance
    unsigned workers = 0;            // 0 = worker_count()
};

// Channel exponents in the caller's labels. Built from either spec type.
struct SimInstance {
    Eigen::MatrixXd alpha;
    Eigen::MatrixXd beta;

    static SimInstance from(const ChannelSpec2& spec);
    static SimInstance from(const SymmetricSpecK& spec);
};

// Means over trials at one SNR. Matrices are [layer][receiver] with the
// receiver in the caller's labels; NaN marks "not applicable" (inactive layer
// or a receiver that does not decode the layer).
struct SimSnapshot {
    double P = 0;
    int trials = 0;
    int redraws = 0;
    std::vector<std::vector<double>> log10_power;
    std::vector<std::vector<double>> log10_sinr;
    std::vector<std::vector<double>> rate; // bits per channel use at decoding receivers
    std::vector<double> layer_rate;        // min over decoding receivers
    std::vector<double> user_rate;         // caller's user order
    double max_antenna_power = 0;
    double max_zf_residual = 0;
};

// Trials draw (G_hat, G_tilde) from derive_seed(seed, {trial, attempt}); the
// same draws are reused at every P so slopes use common random numbers.
SimSnapshot simulate(const SchemeLayout& layout, const SimInstance& instance, const BoundedDensitySpec& density,
                     double P, int trials, std::uint64_t seed, const SimOptions& options = {});

struct SimResult {
    std::vector<double> p_grid;
    std::vector<SimSnapshot> snapshots;
    std::vector<std::vector<double>> sinr_exponent;  // [layer][receiver]
    std::vector<std::vector<double>> power_exponent; // [layer][receiver]
    std::vector<std::vector<int>> decode_success;    // 1/0, -1 when not decoded there
    std::vector<double> slope_estimates;             // caller's user order
    std::vector<std::vector<double>> user_rates;     // [P index][user]
    int redraws = 0;
};

// SNR points at or above this are used for exponent fits when at least two exist.
inline constexpr double kExponentFitMinP = 1e8;
inline constexpr double kDecodeMargin = 0.05;

SimResult estimate_gdof_slope(const SchemeLayout& layout, const SimInstance& instance,
                              const BoundedDensitySpec& density, std::span<const double> p_grid, int trials,
                              std::uint64_t seed, const SimOptions& options = {});

} // namespace gdof

#endif
