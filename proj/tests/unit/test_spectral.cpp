// SPDX-License-Identifier: Apache-2.0
//
// riscf - RIS-assisted cell-free massive MIMO NOMA simulator and optimizer
// Copyright (C) 2026 The riscf Authors
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

#include "riscf/power_opt.hpp"
#include "../support.hpp"

#include <doctest.h>

#include <cmath>

using namespace riscf;

namespace
{
    // Direct transcription of the closed-form SINR with explicit sums; no shared partial terms.
    double oracle_sinr(const ChannelStats &s, const RealTensor &eta, double rho, const Ordering &ord, int k, int n)
    {
        const int M = s.M(), K = s.K(), N = s.N();
        auto S = [&](int m, int kk)
        {
            double v = 0.0;
            for (int i = 0; i < N; ++i)
                v += s.delta(m, kk, i);
            return v;
        };
        auto coherent = [&](int j)
        {
            double v = 0.0;
            for (int m = 0; m < M; ++m)
                v += std::sqrt(eta(m, k, j)) * s.gamma(m, k) * s.delta(m, k, n) / S(m, k);
            return v;
        };
        auto spread = [&](int j)
        {
            double v = 0.0;
            for (int m = 0; m < M; ++m)
                v += eta(m, k, j) * s.delta(m, k, n) * s.gamma(m, k);
            return v;
        };
        const double ds = rho * coherent(n) * coherent(n);
        const double bu = rho * spread(n);
        double inherent = 0.0, residual = 0.0, inter = 0.0;
        for (int j = 0; j < N; ++j)
        {
            if (ord.rank[k][j] < ord.rank[k][n])
                inherent += rho * (coherent(j) * coherent(j) + spread(j));
            else if (ord.rank[k][j] > ord.rank[k][n])
                residual += rho * spread(j);
        }
        for (int kk = 0; kk < K; ++kk)
            if (kk != k)
                for (int j = 0; j < N; ++j)
                    for (int m = 0; m < M; ++m)
                        inter += rho * eta(m, kk, j) * s.delta(m, k, n) * s.gamma(m, kk);
        return ds / (bu + inherent + residual + inter + 1.0);
    }

    ChannelStats random_stats(int M, int K, int N, std::uint64_t seed)
    {
        Rng rng = make_rng(seed, 5);
        RealTensor delta(M, K, N);
        for (double &v : delta.data())
            v = 0.05 + uniform01(rng);
        return testing::make_stats(delta, 3.0);
    }

    RealTensor random_eta(const ChannelStats &s, std::uint64_t seed)
    {
        Rng rng = make_rng(seed, 6);
        RealTensor eta = equal_power_allocation(s);
        for (double &v : eta.data())
            v *= 0.2 + 0.8 * uniform01(rng);
        return eta;
    }
}

TEST_CASE("single link by hand")
{
    RealTensor delta(1, 1, 1, 1.0);
    Eigen::MatrixXd gamma(1, 1);
    gamma(0, 0) = 0.5;
    const SEReport r = closed_form_sinr(testing::make_stats(delta, gamma), RealTensor(1, 1, 1, 1.0), 1.0,
                                        Ordering::identity(1, 1), 1.0);
    CHECK(r.ds(0, 0) == doctest::Approx(0.25));
    CHECK(r.bu(0, 0) == doctest::Approx(0.5));
    CHECK(r.sinr(0, 0) == doctest::Approx(0.25 / 1.5).epsilon(1e-12));
    CHECK(r.se(0, 0) == doctest::Approx(std::log2(1.0 + 0.25 / 1.5)));

    const SEReport z = closed_form_sinr(testing::make_stats(delta, gamma), RealTensor(1, 1, 1, 0.0), 1.0,
                                        Ordering::identity(1, 1), 1.0);
    CHECK(z.sinr(0, 0) == 0.0);
    CHECK(z.sum_se == 0.0);
}

TEST_CASE("closed form against the explicit-sum oracle")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        const ChannelStats s = random_stats(4, 3, 3, seed);
        const RealTensor eta = random_eta(s, seed);
        const Ordering ord = order_users(s);
        const SEReport r = closed_form_sinr(s, eta, 7.0, ord, 0.8);
        double total = 0.0;
        for (int k = 0; k < 3; ++k)
            for (int n = 0; n < 3; ++n)
            {
                const double g = oracle_sinr(s, eta, 7.0, ord, k, n);
                CHECK(r.sinr(k, n) == doctest::Approx(g).epsilon(1e-12));
                total += 0.8 * std::log2(1.0 + g);
            }
        CHECK(r.sum_se == doctest::Approx(total).epsilon(1e-12));
        CHECK(r.warnings.empty());
    }
}

TEST_CASE("ordering by virtual channel norm")
{
    // member 1 has the larger normalized gain in every AP
    RealTensor delta(2, 1, 3);
    delta(0, 0, 0) = 0.2;
    delta(0, 0, 1) = 0.5;
    delta(0, 0, 2) = 0.3;
    delta(1, 0, 0) = 0.1;
    delta(1, 0, 1) = 0.6;
    delta(1, 0, 2) = 0.3;
    const Ordering o = order_users(testing::make_stats(delta, 10.0));
    CHECK(o.order[0] == std::vector<int>{1, 2, 0});
    CHECK(o.rank[0] == std::vector<int>{2, 0, 1});

    RealTensor tie(1, 1, 3, 0.4);
    const Ordering t = order_users(testing::make_stats(tie, 10.0));
    CHECK(t.order[0] == std::vector<int>{0, 1, 2});

    const Ordering f = Ordering::from_order({{2, 0, 1}});
    CHECK(f.rank[0] == std::vector<int>{1, 2, 0});
    CHECK_THROWS_AS(Ordering::from_order({{0, 0, 1}}), std::invalid_argument);
}

TEST_CASE("relabelling cluster members permutes the report")
{
    const ChannelStats s = random_stats(3, 2, 3, 9);
    const RealTensor eta = random_eta(s, 9);
    const SEReport a = closed_form_sinr(s, eta, 5.0, order_users(s), 0.9);

    const int perm[3] = {2, 0, 1};
    ChannelStats p = s;
    RealTensor peta = eta;
    for (int m = 0; m < 3; ++m)
        for (int k = 0; k < 2; ++k)
            for (int n = 0; n < 3; ++n)
            {
                p.delta(m, k, n) = s.delta(m, k, perm[n]);
                peta(m, k, n) = eta(m, k, perm[n]);
            }
    const SEReport b = closed_form_sinr(p, peta, 5.0, order_users(p), 0.9);
    for (int k = 0; k < 2; ++k)
        for (int n = 0; n < 3; ++n)
            CHECK(b.sinr(k, n) == doctest::Approx(a.sinr(k, perm[n])).epsilon(1e-12));
    CHECK(b.sum_se == doctest::Approx(a.sum_se).epsilon(1e-12));
}

TEST_CASE("scaling rho_d scales every term and cannot lower the SINR")
{
    const ChannelStats s = random_stats(3, 2, 2, 12);
    const RealTensor eta = random_eta(s, 12);
    const Ordering ord = order_users(s);
    const SEReport a = closed_form_sinr(s, eta, 2.0, ord, 1.0);
    const SEReport b = closed_form_sinr(s, eta, 6.0, ord, 1.0);
    CHECK((b.ds - 3.0 * a.ds).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((b.ici - 3.0 * a.ici).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((b.iaci_i - 3.0 * a.iaci_i).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((b.sinr.array() >= a.sinr.array()).all());
}

TEST_CASE("power constraint and SIC violation measures")
{
    const ChannelStats s = random_stats(2, 2, 2, 14);
    RealTensor eta = equal_power_allocation(s);
    CHECK(power_constraint_excess(s, eta) == doctest::Approx(0.0).scale(1.0));
    for (double &v : eta.data())
        v *= 1.5;
    CHECK(power_constraint_excess(s, eta) == doctest::Approx(0.5));
    CHECK(closed_form_sinr(s, eta, 1.0, order_users(s), 1.0).warnings.size() == 1);

    RealTensor e(1, 1, 2);
    e(0, 0, 0) = 1.0;
    e(0, 0, 1) = 2.0;
    const Ordering id = Ordering::identity(1, 2);
    CHECK(sic_violation(e, id) == 0.0);
    e(0, 0, 1) = 0.5;
    CHECK(sic_violation(e, id) == doctest::Approx(0.5));
}

TEST_CASE("ergodic estimate is independent of the thread count")
{
    const Scenario s = testing::strong_ris_scenario(3, 2, 2, 4, 15);
    const PhaseVector th = PhaseVector::zeros(4);
    const RealTensor eta = equal_power_allocation(channel_stats(s, th));
    const ErgodicResult a = ergodic_se(s, th, eta, 500, 3, 1);
    const ErgodicResult b = ergodic_se(s, th, eta, 500, 3, 4);
    CHECK(a.sum_se == b.sum_se);
    CHECK(a.se == b.se);
    CHECK(a.trials == 500);
    CHECK(a.sum_se_stderr > 0.0);
    CHECK_THROWS_AS(ergodic_se(s, th, eta, 0, 3), std::invalid_argument);
}
