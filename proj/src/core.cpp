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

#include "gdof/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gdof {

namespace {

std::string index_path(const char* name, int k, int l)
{
    std::ostringstream os;
    os << name << '[' << k << "][" << l << ']';
    return os.str();
}

double pos(double x) { return std::max(x, 0.0); }

} // namespace

SpecError::SpecError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field))
{
}

ChannelSpec2::ChannelSpec2(const Mat2& alpha, const Mat2& beta) : alpha_(alpha), beta_(beta)
{
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            const double a = alpha[k][l];
            const double b = beta[k][l];
            if (!std::isfinite(a) || a < 0.0)
                throw SpecError(index_path("alpha", k, l), "must be finite and >= 0");
            if (!std::isfinite(b) || b < 0.0)
                throw SpecError(index_path("beta", k, l), "must be finite and >= 0");
            if (b > a)
                throw SpecError(index_path("beta", k, l), "must not exceed " + index_path("alpha", k, l));
        }
}

SymmetricSpecK::SymmetricSpecK(int users, double alpha, double beta) : users_(users), alpha_(alpha), beta_(beta)
{
    if (users < 2)
        throw SpecError("K", "user count must be >= 2");
    if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0)
        throw SpecError("alpha", "must lie in [0, 1]");
    if (!std::isfinite(beta) || beta < 0.0 || beta > alpha)
        throw SpecError("beta", "must lie in [0, alpha]");
}

Eigen::MatrixXd SymmetricSpecK::alpha_matrix() const
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Constant(users_, users_, alpha_);
    a.diagonal().setOnes();
    return a;
}

Eigen::MatrixXd SymmetricSpecK::beta_matrix() const { return Eigen::MatrixXd::Constant(users_, users_, beta_); }

std::string_view to_string(Binding b)
{
    switch (b) {
    case Binding::D1:
        return "D1";
    case Binding::D2:
        return "D2";
    case Binding::Tie:
        return "tie";
    }
    return "?";
}

std::string_view to_string(Regime r)
{
    switch (r) {
    case Regime::SingleUserOptimal1:
        return "SingleUserOptimal(1)";
    case Regime::SingleUserOptimal2:
        return "SingleUserOptimal(2)";
    case Regime::SamePreferredUser:
        return "SamePreferredUser";
    case Regime::DifferentPreferredUsers:
        return "DifferentPreferredUsers";
    case Regime::Boundary:
        return "Boundary";
    }
    return "?";
}

EffectiveCsit effective_csit(const Mat2& beta)
{
    return {std::min(beta[0][0], beta[0][1]), std::min(beta[1][0], beta[1][1])};
}

double bound_d1(const Mat2& a, double beta1)
{
    return std::max(a[0][0], a[0][1]) + std::max({a[1][0] - a[0][0] + beta1, a[1][1] - a[0][1] + beta1, 0.0});
}

double bound_d2(const Mat2& a, double beta2)
{
    return std::max(a[1][0], a[1][1]) + std::max({a[0][0] - a[1][0] + beta2, a[0][1] - a[1][1] + beta2, 0.0});
}

GdofBreakdown sum_gdof_two_user(const ChannelSpec2& spec)
{
    const auto [b1, b2] = effective_csit(spec.beta());
    GdofBreakdown out;
    out.beta1 = b1;
    out.beta2 = b2;
    out.d1 = bound_d1(spec.alpha(), b1);
    out.d2 = bound_d2(spec.alpha(), b2);
    out.d_sum = std::min(out.d1, out.d2);
    out.binding = out.d1 < out.d2 ? Binding::D1 : (out.d2 < out.d1 ? Binding::D2 : Binding::Tie);
    out.regime = classify_regime(spec);
    return out;
}

double sum_gdof_two_user_equivalent(const ChannelSpec2& spec)
{
    const Mat2& a = spec.alpha();
    const auto [b1, b2] = effective_csit(spec.beta());
    const double d1 = std::max({a[0][0], a[0][1], a[1][0] + pos(a[0][1] - a[0][0]) + b1,
                                a[1][1] + pos(a[0][0] - a[0][1]) + b1});
    const double d2 = std::max({a[1][1], a[1][0], a[0][1] + pos(a[1][0] - a[1][1]) + b2,
                                a[0][0] + pos(a[1][1] - a[1][0]) + b2});
    return std::min(d1, d2);
}

double sum_gdof_k_symmetric(const SymmetricSpecK& spec)
{
    const double gap = spec.alpha() - spec.beta();
    return gap + spec.users() * (1.0 - gap);
}

Regime classify_regime(const ChannelSpec2& spec)
{
    const Mat2& a = spec.alpha();
    const auto [b1, b2] = effective_csit(spec.beta());

    // alpha11 >= alpha21 + beta1 and alpha12 >= alpha22 + beta1, written as
    // in bound_d1 so the label and the formula cannot disagree on rounding.
    const bool user1 = a[1][0] - a[0][0] + b1 <= 0.0 && a[1][1] - a[0][1] + b1 <= 0.0;
    if (user1)
        return Regime::SingleUserOptimal1;
    const bool user2 = a[0][0] - a[1][0] + b2 <= 0.0 && a[0][1] - a[1][1] + b2 <= 0.0;
    if (user2)
        return Regime::SingleUserOptimal2;

    auto preferred = [&](int antenna) {
        if (a[0][antenna] > a[1][antenna])
            return 1;
        if (a[1][antenna] > a[0][antenna])
            return 2;
        return 0;
    };
    const int p1 = preferred(0);
    const int p2 = preferred(1);
    if (p1 == 0 || p2 == 0)
        return Regime::Boundary;
    return p1 == p2 ? Regime::SamePreferredUser : Regime::DifferentPreferredUsers;
}

BoundedDensitySpec BoundedDensitySpec::uniform(double est_lo, double est_hi, double err_half_width, bool random_sign)
{
    if (!(est_lo > 0.0) || !(est_hi > est_lo) || !std::isfinite(est_hi))
        throw SpecError("density.estimate", "need 0 < est_lo < est_hi < inf");
    if (!(err_half_width > 0.0) || !std::isfinite(err_half_width))
        throw SpecError("density.error", "error half-width must be positive and finite");
    const double delta1 = est_lo - err_half_width;
    const double delta2 = std::max(est_hi, err_half_width);
    const double f_max = std::max(1.0 / (est_hi - est_lo), 1.0 / (2.0 * err_half_width));
    return BoundedDensitySpec(delta1, delta2, f_max, random_sign ? Family::SignedUniform : Family::Uniform, est_lo,
                              est_hi, err_half_width);
}

BoundedDensitySpec::BoundedDensitySpec(double delta1, double delta2, double f_max, Family family, double est_lo,
                                       double est_hi, double err_half_width)
    : delta1_(delta1), delta2_(delta2), f_max_(f_max), family_(family), est_lo_(est_lo), est_hi_(est_hi),
      err_half_width_(err_half_width)
{
    if (!(est_lo > 0.0) || !(est_hi > est_lo) || !std::isfinite(est_hi))
        throw SpecError("density.estimate", "need 0 < est_lo < est_hi < inf");
    if (!(err_half_width > 0.0) || !std::isfinite(err_half_width))
        throw SpecError("density.error", "error half-width must be positive and finite");
    // |G| >= est_lo - w * P^(-beta/2) >= est_lo - w for every P > 1.
    const double guaranteed_floor = est_lo - err_half_width;
    if (!(delta1 > 0.0))
        throw SpecError("density.delta1", "must be positive");
    if (guaranteed_floor <= 0.0 || delta1 > guaranteed_floor)
        throw SpecError("density.delta1", "family cannot keep |G| >= delta1 (est_lo - w = " +
                                              std::to_string(guaranteed_floor) + ")");
    if (!std::isfinite(delta2) || delta2 < std::max(est_hi, err_half_width))
        throw SpecError("density.delta2", "must bound |G_hat| and |G_tilde|");
    const double needed = std::max(1.0 / (est_hi - est_lo), 1.0 / (2.0 * err_half_width));
    if (!std::isfinite(f_max) || f_max < needed)
        throw SpecError("density.f_max", "must be >= " + std::to_string(needed) + " for this family");
}

std::string BoundedDensitySpec::family_name() const
{
    std::ostringstream os;
    os << (family_ == Family::SignedUniform ? "signed-uniform" : "uniform") << "(G_hat in [" << est_lo_ << ", "
       << est_hi_ << "], G_tilde in [-" << err_half_width_ << ", " << err_half_width_ << "])";
    return os.str();
}

double BoundedDensitySpec::sample_estimate(Rng& rng) const
{
    const double mag = rng.uniform(est_lo_, est_hi_);
    if (family_ == Family::SignedUniform && rng.coin())
        return -mag;
    return mag;
}

double BoundedDensitySpec::sample_error(Rng& rng) const
{
    return rng.uniform(-err_half_width_, err_half_width_);
}

Eigen::MatrixXd ChannelRealization::coefficients() const { return coefficients_at(P); }

Eigen::MatrixXd ChannelRealization::coefficients_at(double P_other) const
{
    Eigen::MatrixXd g(g_hat.rows(), g_hat.cols());
    for (Eigen::Index k = 0; k < g.rows(); ++k)
        for (Eigen::Index l = 0; l < g.cols(); ++l)
            g(k, l) = g_hat(k, l) + std::pow(P_other, -beta(k, l) / 2.0) * g_tilde(k, l);
    return g;
}

ChannelRealization draw_channel(const Eigen::MatrixXd& beta, const BoundedDensitySpec& density, double P, Rng& rng)
{
    if (!(P > 1.0) || !std::isfinite(P))
        throw std::invalid_argument("draw_channel: P must be finite and > 1");
    ChannelRealization r;
    r.P = P;
    r.beta = beta;
    r.g_hat.resize(beta.rows(), beta.cols());
    r.g_tilde.resize(beta.rows(), beta.cols());
    for (Eigen::Index k = 0; k < beta.rows(); ++k)
        for (Eigen::Index l = 0; l < beta.cols(); ++l) {
            r.g_hat(k, l) = density.sample_estimate(rng);
            r.g_tilde(k, l) = density.sample_error(rng);
        }
    return r;
}

ChannelRealization draw_channel(const ChannelSpec2& spec, const BoundedDensitySpec& density, double P,
                                std::uint64_t seed)
{
    Rng rng(seed);
    return draw_channel(to_matrix(spec.beta()), density, P, rng);
}

ChannelRealization draw_channel(const SymmetricSpecK& spec, const BoundedDensitySpec& density, double P,
                                std::uint64_t seed)
{
    Rng rng(seed);
    return draw_channel(spec.beta_matrix(), density, P, rng);
}

Eigen::MatrixXd to_matrix(const Mat2& m)
{
    Eigen::MatrixXd out(2, 2);
    out << m[0][0], m[0][1], m[1][0], m[1][1];
    return out;
}

} // namespace gdof
