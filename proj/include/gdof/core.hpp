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

#ifndef GDOF_CORE_HPP
#define GDOF_CORE_HPP

// Problem instances of the MISO broadcast channel with partial CSIT, the
// closed-form sum-GDoF expressions for the 2-user and symmetric K-user
// channels, and bounded-density channel sampling.
//
// All exponents are exponents of P (not of sqrt(P)). A link with strength
// alpha and CSIT quality beta has amplitude sqrt(P^alpha) and estimation
// error scaled by sqrt(P^-beta).

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "gdof/random.hpp"

namespace gdof {

using Mat2 = std::array<std::array<double, 2>, 2>;

// Validation failure on an input field. field() carries a path such as
// "beta[0][1]" so callers can point at the offending value.
class SpecError : public std::invalid_argument {
  public:
    SpecError(std::string field, const std::string& message);
    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

// 2-user instance: alpha[k][l] >= 0 (finite) and 0 <= beta[k][l] <= alpha[k][l].
class ChannelSpec2 {
  public:
    ChannelSpec2(const Mat2& alpha, const Mat2& beta);

    const Mat2& alpha() const noexcept { return alpha_; }
    const Mat2& beta() const noexcept { return beta_; }
    double alpha(int k, int l) const { return alpha_[k][l]; }
    double beta(int k, int l) const { return beta_[k][l]; }

    bool operator==(const ChannelSpec2&) const = default;

  private:
    Mat2 alpha_;
    Mat2 beta_;
};

// Symmetric K-user instance: unit direct links, cross links of strength
// alpha in [0, 1], every CSIT exponent equal to beta in [0, alpha].
class SymmetricSpecK {
  public:
    SymmetricSpecK(int users, double alpha, double beta);

    int users() const noexcept { return users_; }
    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }

    Eigen::MatrixXd alpha_matrix() const;
    Eigen::MatrixXd beta_matrix() const;

  private:
    int users_;
    double alpha_;
    double beta_;
};

struct EffectiveCsit {
    double beta1;
    double beta2;
};

enum class Binding { D1, D2, Tie };

enum class Regime { SingleUserOptimal1, SingleUserOptimal2, SamePreferredUser, DifferentPreferredUsers, Boundary };

std::string_view to_string(Binding b);
std::string_view to_string(Regime r);

struct GdofBreakdown {
    double beta1 = 0;
    double beta2 = 0;
    double d1 = 0;
    double d2 = 0;
    double d_sum = 0;
    Binding binding = Binding::Tie;
    Regime regime = Regime::Boundary;
};

// Row-wise minima of the CSIT exponents. Only these enter the sum GDoF.
EffectiveCsit effective_csit(const Mat2& beta);

// The two bound expressions with the effective CSIT levels supplied directly.
// No validation; sum_gdof_two_user and the budget optimizer share these.
double bound_d1(const Mat2& alpha, double beta1);
double bound_d2(const Mat2& alpha, double beta2);

GdofBreakdown sum_gdof_two_user(const ChannelSpec2& spec);

// Same value through the max-of-four form of the bounds.
double sum_gdof_two_user_equivalent(const ChannelSpec2& spec);

double sum_gdof_k_symmetric(const SymmetricSpecK& spec);

// Ties between the two single-user conditions resolve to user 1. The
// single-user tests reuse the exact subexpressions of bound_d1/bound_d2 so the
// label agrees bit-for-bit with the formula.
Regime classify_regime(const ChannelSpec2& spec);

// Bounded-density sampling family: estimates uniform on [est_lo, est_hi]
// (optionally with a random sign), errors uniform on [-w, w].
class BoundedDensitySpec {
  public:
    enum class Family { Uniform, SignedUniform };

    // Derives delta1, delta2 and f_max from the family parameters. Rejects
    // parameters that cannot keep |G| bounded away from zero.
    static BoundedDensitySpec uniform(double est_lo = 1.0, double est_hi = 2.0, double err_half_width = 0.5,
                                      bool random_sign = false);

    // Checks claimed bounds against what the family actually guarantees.
    BoundedDensitySpec(double delta1, double delta2, double f_max, Family family, double est_lo, double est_hi,
                       double err_half_width);

    double delta1() const noexcept { return delta1_; }
    double delta2() const noexcept { return delta2_; }
    double f_max() const noexcept { return f_max_; }
    Family family() const noexcept { return family_; }
    std::string family_name() const;

    double est_lo() const noexcept { return est_lo_; }
    double est_hi() const noexcept { return est_hi_; }
    double err_half_width() const noexcept { return err_half_width_; }

    // Supremum of |G| = |G_hat + s G_tilde| over s in [0, 1].
    double coefficient_bound() const noexcept { return est_hi_ + err_half_width_; }

    double sample_estimate(Rng& rng) const;
    double sample_error(Rng& rng) const;

  private:
    double delta1_;
    double delta2_;
    double f_max_;
    Family family_;
    double est_lo_;
    double est_hi_;
    double err_half_width_;
};

// One channel use. coefficients() = g_hat + P^(-beta/2) .* g_tilde.
struct ChannelRealization {
    Eigen::MatrixXd g_hat;
    Eigen::MatrixXd g_tilde;
    Eigen::MatrixXd beta;
    double P = 0;

    Eigen::MatrixXd coefficients() const;
    Eigen::MatrixXd coefficients_at(double P_other) const;
};

// Entries are drawn row-major, estimate before error, from an engine seeded by
// `seed`; the result is a pure function of its arguments.
ChannelRealization draw_channel(const ChannelSpec2& spec, const BoundedDensitySpec& density, double P,
                                std::uint64_t seed);
ChannelRealization draw_channel(const SymmetricSpecK& spec, const BoundedDensitySpec& density, double P,
                                std::uint64_t seed);
ChannelRealization draw_channel(const Eigen::MatrixXd& beta, const BoundedDensitySpec& density, double P, Rng& rng);

Eigen::MatrixXd to_matrix(const Mat2& m);

} // namespace gdof

#endif
