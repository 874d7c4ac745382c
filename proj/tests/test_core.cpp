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

#include "gdof/core.hpp"
#include "oracles.hpp"

using namespace gdof;

namespace {

Mat2 sq(double a11, double a12, double a21, double a22) { return {{{a11, a12}, {a21, a22}}}; }

ChannelSpec2 random_spec(Rng& rng, double scale = 2.0)
{
    Mat2 a{}, b{};
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            a[k][l] = rng.uniform(0, scale);
            b[k][l] = rng.uniform(0, a[k][l]);
        }
    return {a, b};
}

} // namespace

TEST_SUITE("core")
{
    TEST_CASE("effective csit takes row minima")
    {
        auto e = effective_csit(sq(0.4, 0.9, 0.2, 0.2));
        CHECK(e.beta1 == 0.4);
        CHECK(e.beta2 == 0.2);
        e = effective_csit(sq(0, 0, 0, 0));
        CHECK(e.beta1 == 0.0);
        CHECK(e.beta2 == 0.0);
        e = effective_csit(sq(0.3, 0.3, 0.7, 0.5));
        CHECK(e.beta1 == 0.3);
        CHECK(e.beta2 == 0.5);
    }

    TEST_CASE("spec validation reports the offending field")
    {
        try {
            ChannelSpec2(sq(1, 0.5, 0.5, 1), sq(0.2, 0.6, 0, 0));
            FAIL("expected SpecError");
        } catch (const SpecError& e) {
            CHECK(e.field() == "beta[0][1]");
        }
        CHECK_THROWS_AS(ChannelSpec2(sq(-0.1, 0, 0, 0), sq(0, 0, 0, 0)), SpecError);
        CHECK_THROWS_AS(ChannelSpec2(sq(NAN, 0, 0, 0), sq(0, 0, 0, 0)), SpecError);
        CHECK_THROWS_AS(ChannelSpec2(sq(1, 1, 1, 1), sq(0, -0.1, 0, 0)), SpecError);
        CHECK_NOTHROW(ChannelSpec2(sq(3, 0, 0, 2.5), sq(3, 0, 0, 0)));
    }

    TEST_CASE("two-user theorem on the worked instance")
    {
        const ChannelSpec2 spec(sq(1, 0.75, 0.5, 1), sq(0.4, 0.4, 0.2, 0.2));
        const auto b = sum_gdof_two_user(spec);
        CHECK(b.d1 == doctest::Approx(1.65).epsilon(1e-12));
        CHECK(b.d2 == doctest::Approx(1.70).epsilon(1e-12));
        CHECK(b.d_sum == b.d1);
        CHECK(b.binding == Binding::D1);
        CHECK(sum_gdof_two_user_equivalent(spec) == doctest::Approx(1.65).epsilon(1e-12));
        CHECK(b.d_sum == oracle::sum_gdof(spec.alpha(), spec.beta()));
    }

    TEST_CASE("uniform strengths recover 1 + beta")
    {
        for (int i = 0; i <= 64; ++i) {
            const double b = i / 64.0;
            const ChannelSpec2 spec(sq(1, 1, 1, 1), sq(b, b, b, b));
            CHECK(sum_gdof_two_user(spec).d_sum == 1.0 + b);
            CHECK(sum_gdof_two_user_equivalent(spec) == 1.0 + b);
        }
        CHECK(sum_gdof_two_user(ChannelSpec2(sq(1, 1, 1, 1), sq(1, 1, 1, 1))).d_sum == 2.0);
        CHECK(sum_gdof_two_user_equivalent(ChannelSpec2(sq(1, 1, 1, 1), sq(0, 0, 0, 0))) == 1.0);
    }

    TEST_CASE("single-user-optimal instance is insensitive to the second user's csit")
    {
        for (double f : {0.0, 0.5, 0.9, 1.0}) {
            const double b2 = f * 0.3;
            const ChannelSpec2 spec(sq(1, 1, 0.3, 0.3), sq(0.2, 0.2, b2, b2));
            CHECK(sum_gdof_two_user_equivalent(spec) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(sum_gdof_two_user(spec).d_sum == 1.0);
            CHECK(classify_regime(spec) == Regime::SingleUserOptimal1);
        }
    }

    TEST_CASE("regime labels")
    {
        CHECK(classify_regime(ChannelSpec2(sq(1, 0.5, 0.3, 0.7), sq(0.3, 0.3, 0.3, 0.3))) ==
              Regime::DifferentPreferredUsers);
        CHECK(classify_regime(ChannelSpec2(sq(1, 0.5, 0.3, 0.7), sq(0, 0, 0, 0))) == Regime::DifferentPreferredUsers);
        CHECK(classify_regime(ChannelSpec2(sq(0.6, 0.6, 0.6, 0.6), sq(0, 0, 0, 0))) == Regime::SingleUserOptimal1);
        CHECK(classify_regime(ChannelSpec2(sq(0.3, 0.3, 1, 1), sq(0, 0, 0.2, 0.2))) == Regime::SingleUserOptimal2);
        // both antennas prefer user 1, but not by beta1
        CHECK(classify_regime(ChannelSpec2(sq(1, 0.9, 0.8, 0.7), sq(0.5, 0.5, 0, 0))) == Regime::SamePreferredUser);
        // antenna 2 is indifferent
        CHECK(classify_regime(ChannelSpec2(sq(1, 0.7, 0.8, 0.7), sq(0.5, 0.5, 0, 0))) == Regime::Boundary);
    }

    TEST_CASE("single-user optimality matches its value characterization")
    {
        Rng rng(11);
        for (int i = 0; i < 2000; ++i) {
            Mat2 a{}, b{};
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    a[k][l] = static_cast<double>(rng.below(9)) / 8.0;
                    b[k][l] = static_cast<double>(rng.below(static_cast<std::uint64_t>(a[k][l] * 8) + 1)) / 8.0;
                }
            const ChannelSpec2 spec(a, b);
            const double top1 = std::max(a[0][0], a[0][1]);
            bool invariant = true;
            for (int j = 0; j <= 8; ++j) {
                Mat2 bb = b;
                bb[1][0] = std::min(a[1][0], j / 8.0);
                bb[1][1] = std::min(a[1][1], j / 8.0);
                invariant = invariant && sum_gdof_two_user(ChannelSpec2(a, bb)).d_sum == top1;
            }
            const bool su1 = classify_regime(spec) == Regime::SingleUserOptimal1;
            if (su1)
                CHECK(invariant);
            const bool su2 = classify_regime(spec) == Regime::SingleUserOptimal2;
            if (!su1 && !su2)
                CHECK_FALSE(invariant);
        }
    }

    TEST_CASE("random specs agree with the oracle and the equivalent form")
    {
        Rng rng(3);
        for (int i = 0; i < 5000; ++i) {
            const ChannelSpec2 spec = random_spec(rng);
            const double d = sum_gdof_two_user(spec).d_sum;
            CHECK(d == oracle::sum_gdof(spec.alpha(), spec.beta()));
            CHECK(std::abs(d - sum_gdof_two_user_equivalent(spec)) <= 1e-12);
        }
    }

    TEST_CASE("zero csit matches the finite-precision formula")
    {
        Rng rng(5);
        for (int i = 0; i < 2000; ++i) {
            Mat2 a{};
            for (auto& row : a)
                for (auto& v : row)
                    v = rng.uniform(0, 2);
            CHECK(sum_gdof_two_user(ChannelSpec2(a, Mat2{})).d_sum == oracle::sum_gdof_no_csit(a));
        }
    }

    TEST_CASE("k-user theorem")
    {
        CHECK(sum_gdof_k_symmetric(SymmetricSpecK(5, 1, 1)) == 5.0);
        CHECK(sum_gdof_k_symmetric(SymmetricSpecK(5, 1, 0)) == 1.0);
        CHECK(sum_gdof_k_symmetric(SymmetricSpecK(4, 0.6, 0.3)) == doctest::Approx(3.1).epsilon(1e-12));
        CHECK_THROWS_AS(SymmetricSpecK(3, 1.2, 0), SpecError);
        CHECK_THROWS_AS(SymmetricSpecK(3, 0.5, 0.6), SpecError);
        CHECK_THROWS_AS(SymmetricSpecK(1, 0.5, 0.1), SpecError);
        for (int ia = 0; ia <= 16; ++ia)
            for (int ib = 0; ib <= ia; ++ib) {
                const double a = ia / 16.0, b = ib / 16.0;
                const ChannelSpec2 two(sq(1, a, a, 1), sq(b, b, b, b));
                CHECK(sum_gdof_two_user(two).d_sum == sum_gdof_k_symmetric(SymmetricSpecK(2, a, b)));
                CHECK(sum_gdof_two_user(two).d_sum == 2.0 - a + b);
            }
        const auto am = SymmetricSpecK(3, 0.6, 0.3).alpha_matrix();
        CHECK(am(0, 0) == 1.0);
        CHECK(am(0, 2) == 0.6);
    }

    TEST_CASE("bounded density family")
    {
        const auto d = BoundedDensitySpec::uniform();
        CHECK(d.delta1() == 0.5);
        CHECK(d.delta2() == 2.0);
        CHECK(d.f_max() == 1.0);
        CHECK_THROWS_AS(BoundedDensitySpec::uniform(0.4, 2.0, 0.5), SpecError);
        CHECK_THROWS_AS(BoundedDensitySpec(0.6, 2.0, 1.0, BoundedDensitySpec::Family::Uniform, 1.0, 2.0, 0.5),
                        SpecError);
        CHECK_THROWS_AS(BoundedDensitySpec(0.5, 2.0, 0.5, BoundedDensitySpec::Family::Uniform, 1.0, 2.0, 0.5),
                        SpecError);
    }

    TEST_CASE("channel draws respect the density bounds and are reproducible")
    {
        const auto density = BoundedDensitySpec::uniform();
        const ChannelSpec2 spec(sq(1, 0.6, 0.4, 1), sq(0.2, 0.0, 0.4, 0.9));
        double min_abs = 1e9;
        for (std::uint64_t s = 0; s < 10000; ++s) {
            const auto r = draw_channel(spec, density, 10.0, s);
            CHECK(r.g_hat.cwiseAbs().maxCoeff() < density.delta2());
            CHECK(r.g_tilde.cwiseAbs().maxCoeff() < density.delta2());
            min_abs = std::min(min_abs, r.coefficients().cwiseAbs().minCoeff());
        }
        CHECK(min_abs >= density.delta1());
        const auto a = draw_channel(spec, density, 1e6, 99);
        const auto b = draw_channel(spec, density, 1e6, 99);
        CHECK(a.g_hat == b.g_hat);
        CHECK(a.g_tilde == b.g_tilde);
        CHECK_THROWS_AS(draw_channel(spec, density, 1.0, 1), std::invalid_argument);

        const auto signed_density = BoundedDensitySpec::uniform(1, 2, 0.5, true);
        bool negative = false;
        for (std::uint64_t s = 0; s < 100; ++s) {
            const auto r = draw_channel(spec, signed_density, 4.0, s);
            negative = negative || r.g_hat.minCoeff() < 0;
            CHECK(r.coefficients().cwiseAbs().minCoeff() >= signed_density.delta1());
        }
        CHECK(negative);
    }

    TEST_CASE("seed derivation separates streams")
    {
        CHECK(derive_seed(1, {0}) != derive_seed(1, {1}));
        CHECK(derive_seed(1, {0, 1}) != derive_seed(1, {1, 0}));
        CHECK(derive_seed(7, {3}) == derive_seed(7, {3}));
        Rng r(5);
        for (int i = 0; i < 1000; ++i) {
            const double u = r.uniform();
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
            CHECK(r.below(7) < 7u);
        }
    }
}
