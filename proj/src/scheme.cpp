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

#include "gdof/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gdof/parallel.hpp"
#include "gdof/random.hpp"
#include "gdof/stats.hpp"

namespace gdof {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pos(double x) { return std::max(x, 0.0); }

} // namespace

std::string_view to_string(SchemeCase c)
{
    switch (c) {
    case SchemeCase::Case1:
        return "Case1";
    case SchemeCase::Case2:
        return "Case2";
    case SchemeCase::Case3:
        return "Case3";
    case SchemeCase::KUserSymmetric:
        return "KUserSymmetric";
    case SchemeCase::SingleUser:
        return "SingleUser";
    }
    return "?";
}

Mat2 Transform::apply(const Mat2& m) const
{
    Mat2 out = m;
    if (swap_users)
        std::swap(out[0], out[1]);
    if (swap_antennas)
        for (auto& row : out)
            std::swap(row[0], row[1]);
    return out;
}

ChannelSpec2 Transform::apply(const ChannelSpec2& spec) const
{
    return ChannelSpec2(apply(spec.alpha()), apply(spec.beta()));
}

Eigen::MatrixXd Transform::apply(const Eigen::MatrixXd& m) const
{
    if (is_identity())
        return m;
    if (m.rows() != 2 || m.cols() != 2)
        throw std::invalid_argument("Transform: permutations are defined for 2x2 channels only");
    Eigen::MatrixXd out = m;
    if (swap_users)
        out.row(0).swap(out.row(1));
    if (swap_antennas)
        out.col(0).swap(out.col(1));
    return out;
}

std::pair<ChannelSpec2, Transform> normalize_instance(const ChannelSpec2& spec)
{
    const Mat2& a = spec.alpha();
    const double top = std::max({a[0][0], a[0][1], a[1][0], a[1][1]});
    for (const Transform t : {Transform{false, false}, Transform{true, false}, Transform{false, true},
                              Transform{true, true}}) {
        if (t.apply(a)[0][0] == top)
            return {t.apply(spec), t};
    }
    throw std::logic_error("normalize_instance: no permutation places the maximum at (1,1)");
}

std::string MessageId::name() const
{
    switch (kind) {
    case MessageKind::Wc:
        return "Wc";
    case MessageKind::W1z:
        return "W1z";
    case MessageKind::W1p:
        return "W1p";
    case MessageKind::W2z:
        return "W2z";
    case MessageKind::Wtop:
        return "Wtop";
    case MessageKind::Wkp:
        return "W" + std::to_string(user + 1) + "p";
    }
    return "?";
}

std::string PrecoderRule::name() const
{
    switch (kind) {
    case PrecoderKind::Generic:
        return "generic";
    case PrecoderKind::AntennaOne:
        return "antenna_one";
    case PrecoderKind::ZeroForceUser:
        return "zero_force_user(" + std::to_string(user + 1) + ")";
    case PrecoderKind::ZeroForceAllBut:
        return "zero_force_all_but(" + std::to_string(user + 1) + ")";
    }
    return "?";
}

std::vector<double> SchemeLayout::original_target() const
{
    std::vector<double> out(target.size());
    for (std::size_t k = 0; k < target.size(); ++k)
        out[static_cast<std::size_t>(transform.user(static_cast<int>(k)))] = target[k];
    return out;
}

double SchemeLayout::total_target() const
{
    double s = 0;
    for (double d : target)
        s += d;
    return s;
}

SchemeLayout build_layout(const ChannelSpec2& spec)
{
    const auto [ns, tr] = normalize_instance(spec);
    const Mat2& a = ns.alpha();
    const auto [b1, b2] = effective_csit(ns.beta());

    SchemeLayout L;
    L.users = 2;
    L.transform = tr;
    L.alpha = to_matrix(a);
    L.beta = to_matrix(Mat2{{{b1, b1}, {b2, b2}}});

    // Strip the top levels of antenna 1 when receiver 2 hears antenna 1 more
    // strongly than antenna 2; r is the channel left for the layered scheme.
    Mat2 r = a;
    double delta = 0;
    if (a[1][0] > a[1][1]) {
        if (a[0][0] - a[0][1] > a[1][0] - a[1][1]) {
            L.case_id = SchemeCase::Case1;
            delta = a[1][0] - a[1][1];
            r = {{{a[0][0] - delta, a[0][1]}, {a[1][1], a[1][1]}}};
        } else {
            L.case_id = SchemeCase::Case2;
            delta = a[0][0] - a[0][1];
            r = {{{a[0][1], a[0][1]}, {a[1][0] - delta, a[1][1]}}};
        }
    } else {
        L.case_id = SchemeCase::Case3;
    }

    const double top2 = std::max(r[1][0], r[1][1]); // receiver 2's strongest level
    const double low2 = std::min(r[1][0], r[1][1]);
    const double m = std::min(pos(top2 - r[0][1] + b1), top2 - low2 + b2);

    if (m <= 0.0) {
        L.case_id = SchemeCase::SingleUser;
        L.m = 0;
        L.reduction = 0;
        LayerSpec w;
        w.message = {MessageKind::W1p};
        w.owner = 0;
        w.gdof_load = a[0][0];
        w.power_exponent = 0;
        w.precoder = {PrecoderKind::AntennaOne};
        w.decoded_by = {{0, 1}};
        L.layers.push_back(w);
        L.target = {a[0][0], 0.0};
        return L;
    }

    L.m = m;
    L.reduction = delta;
    const int o = delta > 0 ? 1 : 0;
    const PrecoderRule common_dir{L.case_id == SchemeCase::Case3 ? PrecoderKind::Generic : PrecoderKind::AntennaOne};

    if (delta > 0) {
        LayerSpec top;
        top.message = {MessageKind::Wtop};
        top.owner = 0;
        top.gdof_load = delta;
        top.power_exponent = 0;
        top.precoder = {PrecoderKind::AntennaOne};
        top.reduced = false;
        top.decoded_by = {{0, 1}, {1, 1}};
        L.layers.push_back(top);
    }

    LayerSpec wc;
    wc.message = {MessageKind::Wc};
    wc.owner = 0;
    wc.gdof_load = top2 - m;
    wc.power_exponent = 0;
    wc.precoder = common_dir;
    wc.reduced = true;
    wc.decoded_by = {{0, o + 1}, {1, o + 1}};
    L.layers.push_back(wc);

    LayerSpec w1z;
    w1z.message = {MessageKind::W1z};
    w1z.owner = 0;
    w1z.gdof_load = m;
    w1z.power_exponent = m - top2;
    w1z.precoder = {PrecoderKind::ZeroForceUser, 1};
    w1z.reduced = true;
    w1z.decoded_by = {{0, o + 2}};
    w1z.leakage = {{1, m - top2 + low2 - b2}};
    L.layers.push_back(w1z);

    LayerSpec w1p;
    w1p.message = {MessageKind::W1p};
    w1p.owner = 0;
    w1p.gdof_load = r[0][0] - top2;
    w1p.power_exponent = -top2;
    w1p.precoder = common_dir;
    w1p.reduced = true;
    w1p.decoded_by = {{0, o + 3}};
    L.layers.push_back(w1p);

    LayerSpec w2z;
    w2z.message = {MessageKind::W2z};
    w2z.owner = 1;
    w2z.gdof_load = m;
    w2z.power_exponent = m - top2;
    w2z.precoder = {PrecoderKind::ZeroForceUser, 0};
    w2z.reduced = true;
    w2z.decoded_by = {{1, o + 2}};
    w2z.leakage = {{0, m - top2 + r[0][1] - b1}};
    L.layers.push_back(w2z);

    L.target = {a[0][0], m};
    return L;
}

SchemeLayout build_layout_k(const SymmetricSpecK& spec)
{
    const int K = spec.users();
    const double gap = spec.alpha() - spec.beta();
    const double priv = 1.0 - gap;

    SchemeLayout L;
    L.case_id = SchemeCase::KUserSymmetric;
    L.users = K;
    L.alpha = spec.alpha_matrix();
    L.beta = spec.beta_matrix();
    L.m = priv;

    LayerSpec wc;
    wc.message = {MessageKind::Wc};
    wc.owner = 0;
    wc.gdof_load = gap;
    wc.power_exponent = 0;
    wc.complement_exponent = -gap;
    wc.precoder = {PrecoderKind::Generic};
    for (int k = 0; k < K; ++k)
        wc.decoded_by.push_back({k, 1});
    L.layers.push_back(wc);

    for (int k = 0; k < K; ++k) {
        LayerSpec w;
        w.message = {MessageKind::Wkp, k};
        w.owner = k;
        w.gdof_load = priv;
        w.power_exponent = -gap;
        w.precoder = {PrecoderKind::ZeroForceAllBut, k};
        w.decoded_by = {{k, 2}};
        for (int j = 0; j < K; ++j)
            if (j != k)
                w.leakage.push_back({j, 0.0});
        L.layers.push_back(w);
    }

    L.target.assign(static_cast<std::size_t>(K), priv);
    L.target[0] = 1.0;
    return L;
}

SimInstance SimInstance::from(const ChannelSpec2& spec) { return {to_matrix(spec.alpha()), to_matrix(spec.beta())}; }

SimInstance SimInstance::from(const SymmetricSpecK& spec) { return {spec.alpha_matrix(), spec.beta_matrix()}; }

namespace {

struct TrialOutcome {
    // [layer * K + receiver], normalized labels
    std::vector<double> log10_power;
    std::vector<double> log10_sinr;
    std::vector<double> rate;
    double max_antenna_power = 0;
    double max_zf_residual = 0;
    int redraws = 0;
};

bool needs_inverse(const SchemeLayout& L)
{
    return std::any_of(L.layers.begin(), L.layers.end(),
                       [](const LayerSpec& l) { return l.precoder.kind == PrecoderKind::ZeroForceAllBut; });
}

double condition_number(const Eigen::MatrixXd& m)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) == 0.0)
        return std::numeric_limits<double>::infinity();
    return s(0) / s(s.size() - 1);
}

// Estimated channel after the antenna-1 reduction, scaled so that its largest
// strength exponent is zero (keeps entries O(1) for the inverse).
Eigen::MatrixXd scaled_estimate(const SchemeLayout& L, const Eigen::MatrixXd& g_hat, double P)
{
    const Eigen::Index K = g_hat.rows();
    const double top = L.alpha.maxCoeff();
    Eigen::MatrixXd h(K, K);
    for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index l = 0; l < K; ++l) {
            double e = L.alpha(k, l) - top;
            if (l == 0)
                e -= L.reduction;
            h(k, l) = std::pow(P, e / 2.0) * g_hat(k, l);
        }
    return h;
}

TrialOutcome evaluate_trial(const SchemeLayout& L, const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& beta,
                            const Eigen::MatrixXd& g_hat, const Eigen::MatrixXd& g_tilde, double P,
                            const Eigen::MatrixXd& h_scaled)
{
    const Eigen::Index K = alpha.rows();
    const std::size_t nl = L.layers.size();
    const auto Ku = static_cast<std::size_t>(K);

    Eigen::MatrixXd h_est(K, K), h_act(K, K);
    for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index l = 0; l < K; ++l) {
            const double amp = std::pow(P, alpha(k, l) / 2.0);
            h_est(k, l) = amp * g_hat(k, l);
            h_act(k, l) = amp * (g_hat(k, l) + std::pow(P, -beta(k, l) / 2.0) * g_tilde(k, l));
        }

    Eigen::VectorXd reduce = Eigen::VectorXd::Ones(K);
    reduce(0) = std::pow(P, -L.reduction / 2.0);

    Eigen::MatrixXd inverse;
    if (needs_inverse(L))
        inverse = h_scaled.partialPivLu().inverse();

    TrialOutcome out;
    out.log10_power.assign(nl * Ku, kNaN);
    out.log10_sinr.assign(nl * Ku, kNaN);
    out.rate.assign(nl * Ku, kNaN);

    std::vector<Eigen::VectorXd> tx(nl);
    std::vector<bool> active(nl, false);
    for (std::size_t j = 0; j < nl; ++j) {
        const LayerSpec& layer = L.layers[j];
        double amp2 = std::pow(P, layer.power_exponent);
        if (layer.complement_exponent)
            amp2 *= 1.0 - std::pow(P, *layer.complement_exponent);
        if (!(amp2 > 0.0))
            continue;
        active[j] = true;

        Eigen::VectorXd dir(K);
        switch (layer.precoder.kind) {
        case PrecoderKind::Generic:
            dir.setOnes();
            break;
        case PrecoderKind::AntennaOne:
            dir.setZero();
            dir(0) = 1.0;
            break;
        case PrecoderKind::ZeroForceUser: {
            if (K != 2)
                throw std::logic_error("zero_force_user is defined for two antennas");
            const auto row = h_scaled.row(layer.precoder.user);
            dir << row(1), -row(0);
            dir.normalize();
            break;
        }
        case PrecoderKind::ZeroForceAllBut:
            dir = inverse.col(layer.precoder.user).normalized();
            break;
        }
        if (layer.reduced)
            dir = dir.cwiseProduct(reduce);

        // Orthogonality against the unreduced estimated rows the layer nulls.
        auto residual = [&](int user) {
            const Eigen::VectorXd row = h_est.row(user).transpose();
            return std::abs(row.dot(dir)) / (row.norm() * dir.norm());
        };
        if (layer.precoder.kind == PrecoderKind::ZeroForceUser)
            out.max_zf_residual = std::max(out.max_zf_residual, residual(layer.precoder.user));
        if (layer.precoder.kind == PrecoderKind::ZeroForceAllBut)
            for (int u = 0; u < K; ++u)
                if (u != layer.precoder.user)
                    out.max_zf_residual = std::max(out.max_zf_residual, residual(u));

        tx[j] = std::sqrt(amp2) * dir;
    }

    Eigen::VectorXd antenna_power = Eigen::VectorXd::Zero(K);
    for (std::size_t j = 0; j < nl; ++j)
        if (active[j])
            antenna_power += tx[j].cwiseAbs2();
    const double worst = antenna_power.maxCoeff();
    if (!(worst > 0.0) || !std::isfinite(worst))
        throw PowerConstraintViolation("degenerate transmit signal");
    const double scale = 1.0 / std::sqrt(worst);
    for (std::size_t j = 0; j < nl; ++j)
        if (active[j])
            tx[j] *= scale;
    out.max_antenna_power = (antenna_power * (scale * scale)).maxCoeff();

    // received[k][j]
    std::vector<double> received(Ku * nl, 0.0);
    for (std::size_t j = 0; j < nl; ++j) {
        if (!active[j])
            continue;
        for (Eigen::Index k = 0; k < K; ++k) {
            const double a = h_act.row(k).dot(tx[j]);
            received[static_cast<std::size_t>(k) * nl + j] = a * a;
            out.log10_power[j * Ku + static_cast<std::size_t>(k)] = std::log10(a * a);
        }
    }

    for (Eigen::Index k = 0; k < K; ++k) {
        std::vector<std::pair<int, std::size_t>> chain;
        for (std::size_t j = 0; j < nl; ++j)
            for (const auto& step : L.layers[j].decoded_by)
                if (step.receiver == k && active[j])
                    chain.push_back({step.rank, j});
        std::sort(chain.begin(), chain.end());

        std::vector<bool> pending = active;
        const double* pw = &received[static_cast<std::size_t>(k) * nl];
        for (const auto& [rank, j] : chain) {
            double interference = 1.0; // unit-variance noise
            for (std::size_t i = 0; i < nl; ++i)
                if (pending[i] && i != j)
                    interference += pw[i];
            const double sinr = pw[j] / interference;
            const std::size_t idx = j * Ku + static_cast<std::size_t>(k);
            out.log10_sinr[idx] = std::log10(sinr);
            out.rate[idx] = 0.5 * std::log2(1.0 + sinr);
            pending[j] = false;
        }
    }
    return out;
}

} // namespace

SimSnapshot simulate(const SchemeLayout& layout, const SimInstance& instance, const BoundedDensitySpec& density,
                     double P, int trials, std::uint64_t seed, const SimOptions& options)
{
    if (!(P > 1.0) || !std::isfinite(P))
        throw std::invalid_argument("simulate: P must be finite and > 1");
    if (trials < 1)
        throw std::invalid_argument("simulate: trials must be >= 1");
    const int K = layout.users;
    if (instance.alpha.rows() != K || instance.alpha.cols() != K || instance.beta.rows() != K ||
        instance.beta.cols() != K)
        throw std::invalid_argument("simulate: instance size does not match the layout");

    const Transform& tr = layout.transform;
    const Eigen::MatrixXd alpha_n = tr.apply(instance.alpha);
    const Eigen::MatrixXd beta_n = tr.apply(instance.beta);
    if ((alpha_n - layout.alpha).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("simulate: layout was built for a different channel");
    const bool check_condition = needs_inverse(layout);

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
    parallel_for(
        outcomes.size(),
        [&](std::size_t t) {
            int redraws = 0;
            for (int attempt = 0;; ++attempt) {
                Rng rng = Rng::stream(seed, {static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(attempt)});
                const ChannelRealization real = draw_channel(instance.beta, density, P, rng);
                const Eigen::MatrixXd g_hat = tr.apply(real.g_hat);
                const Eigen::MatrixXd g_tilde = tr.apply(real.g_tilde);
                const Eigen::MatrixXd h_scaled = scaled_estimate(layout, g_hat, P);
                if (check_condition && condition_number(h_scaled) > options.max_condition) {
                    if (++redraws > options.max_redraws)
                        throw std::runtime_error("simulate: too many ill-conditioned channel draws");
                    continue;
                }
                outcomes[t] = evaluate_trial(layout, alpha_n, beta_n, g_hat, g_tilde, P, h_scaled);
                outcomes[t].redraws = redraws;
                return;
            }
        },
        options.workers);

    const std::size_t nl = layout.layers.size();
    const auto Ku = static_cast<std::size_t>(K);
    SimSnapshot snap;
    snap.P = P;
    snap.trials = trials;
    snap.log10_power.assign(nl, std::vector<double>(Ku, kNaN));
    snap.log10_sinr.assign(nl, std::vector<double>(Ku, kNaN));
    snap.rate.assign(nl, std::vector<double>(Ku, kNaN));
    snap.layer_rate.assign(nl, 0.0);
    snap.user_rate.assign(Ku, 0.0);

    auto mean_of = [&](auto member, std::size_t idx) {
        double s = 0;
        for (const auto& o : outcomes)
            s += (o.*member)[idx];
        return s / static_cast<double>(outcomes.size());
    };

    for (const auto& o : outcomes) {
        snap.redraws += o.redraws;
        snap.max_antenna_power = std::max(snap.max_antenna_power, o.max_antenna_power);
        snap.max_zf_residual = std::max(snap.max_zf_residual, o.max_zf_residual);
    }
    if (snap.max_antenna_power > 1.0 + options.power_tolerance)
        throw PowerConstraintViolation("per-antenna transmit power " + std::to_string(snap.max_antenna_power) +
                                       " exceeds 1");

    for (std::size_t j = 0; j < nl; ++j) {
        double layer_rate = std::numeric_limits<double>::infinity();
        bool decoded = false;
        for (std::size_t k = 0; k < Ku; ++k) {
            const std::size_t idx = j * Ku + k;
            const auto rk = static_cast<std::size_t>(tr.user(static_cast<int>(k)));
            const double lp = mean_of(&TrialOutcome::log10_power, idx);
            snap.log10_power[j][rk] = lp;
            if (!std::isnan(outcomes.front().rate[idx])) {
                snap.log10_sinr[j][rk] = mean_of(&TrialOutcome::log10_sinr, idx);
                const double r = mean_of(&TrialOutcome::rate, idx);
                snap.rate[j][rk] = r;
                layer_rate = std::min(layer_rate, r);
                decoded = true;
            }
        }
        snap.layer_rate[j] = decoded ? layer_rate : 0.0;
        const auto owner = static_cast<std::size_t>(tr.user(layout.layers[j].owner));
        snap.user_rate[owner] += snap.layer_rate[j];
    }
    return snap;
}

SimResult estimate_gdof_slope(const SchemeLayout& layout, const SimInstance& instance,
                              const BoundedDensitySpec& density, std::span<const double> p_grid, int trials,
                              std::uint64_t seed, const SimOptions& options)
{
    if (p_grid.size() < 2)
        throw std::invalid_argument("estimate_gdof_slope: P grid needs at least two points");
    for (std::size_t i = 1; i < p_grid.size(); ++i)
        if (!(p_grid[i] > p_grid[i - 1]))
            throw std::invalid_argument("estimate_gdof_slope: P grid must be strictly ascending");
    if (std::log10(p_grid.back() / p_grid.front()) < 3.0 - 1e-9)
        throw std::invalid_argument("estimate_gdof_slope: P grid must span at least three decades");

    SimResult res;
    res.p_grid.assign(p_grid.begin(), p_grid.end());
    for (double P : p_grid) {
        res.snapshots.push_back(simulate(layout, instance, density, P, trials, seed, options));
        res.redraws += res.snapshots.back().redraws;
        res.user_rates.push_back(res.snapshots.back().user_rate);
    }

    const auto K = static_cast<std::size_t>(layout.users);
    std::vector<double> x_rate;
    for (double P : p_grid)
        x_rate.push_back(0.5 * std::log2(P));
    res.slope_estimates.assign(K, 0.0);
    for (std::size_t u = 0; u < K; ++u) {
        std::vector<double> y;
        for (const auto& s : res.snapshots)
            y.push_back(s.user_rate[u]);
        res.slope_estimates[u] = ls_slope(x_rate, y);
    }

    std::vector<std::size_t> fit_idx;
    for (std::size_t i = 0; i < p_grid.size(); ++i)
        if (p_grid[i] >= kExponentFitMinP)
            fit_idx.push_back(i);
    if (fit_idx.size() < 2) {
        fit_idx.clear();
        for (std::size_t i = 0; i < p_grid.size(); ++i)
            fit_idx.push_back(i);
    }
    std::vector<double> x_exp;
    for (std::size_t i : fit_idx)
        x_exp.push_back(std::log10(p_grid[i]));

    auto fit = [&](auto member, std::size_t j, std::size_t k) {
        std::vector<double> y;
        for (std::size_t i : fit_idx) {
            const double v = (res.snapshots[i].*member)[j][k];
            if (!std::isfinite(v))
                return kNaN;
            y.push_back(v);
        }
        return ls_slope(x_exp, y);
    };

    const std::size_t nl = layout.layers.size();
    res.sinr_exponent.assign(nl, std::vector<double>(K, kNaN));
    res.power_exponent.assign(nl, std::vector<double>(K, kNaN));
    res.decode_success.assign(nl, std::vector<int>(K, -1));
    for (std::size_t j = 0; j < nl; ++j)
        for (std::size_t k = 0; k < K; ++k) {
            res.power_exponent[j][k] = fit(&SimSnapshot::log10_power, j, k);
            if (!std::isnan(res.snapshots.front().log10_sinr[j][k])) {
                res.sinr_exponent[j][k] = fit(&SimSnapshot::log10_sinr, j, k);
                res.decode_success[j][k] =
                    res.sinr_exponent[j][k] >= layout.layers[j].gdof_load - kDecodeMargin ? 1 : 0;
            }
        }
    return res;
}

} // namespace gdof
