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

#include "riscf/channels.hpp"
#include "../support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace riscf;

namespace
{
    Scenario small_drop(std::uint64_t seed, bool correlated = true)
    {
        SystemConfig c;
        c.M = 3;
        c.K = 2;
        c.N = 2;
        c.L = 8;
        c.tau_p = 2;
        c.correlated = correlated;
        c.seed = seed;
        return generate_scenario(c);
    }
}

TEST_CASE("phase wrapping")
{
    const double two_pi = 2.0 * std::numbers::pi;
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(two_pi) == 0.0);
    CHECK(wrap_phase(-0.5) == doctest::Approx(two_pi - 0.5));
    CHECK(wrap_phase(7.0 * two_pi + 1.0) == doctest::Approx(1.0));
    CHECK(wrap_phase(std::nextafter(two_pi, 0.0)) < two_pi);

    const PhaseVector p({-1.0, 10.0, 3.0});
    for (int i = 0; i < p.size(); ++i)
    {
        CHECK(p[i] >= 0.0);
        CHECK(p[i] < two_pi);
    }
    CHECK_THROWS_AS(PhaseVector({0.0, NAN}), std::invalid_argument);
    CHECK_THROWS_AS(PhaseVector({INFINITY}), std::invalid_argument);
}

TEST_CASE("LMMSE scalars")
{
    RealTensor delta(1, 1, 2);
    delta(0, 0, 0) = 0.004;
    delta(0, 0, 1) = 0.006;
    const LmmseStats s = lmmse_stats(delta, 4, 25.0); // tau_p rho_p = 100, S = 0.01
    CHECK(s.c(0, 0) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(s.gamma(0, 0) == doctest::Approx(0.005).epsilon(1e-12));

    // gamma stays below S and approaches it with pilot SNR
    double prev = 0.0;
    for (double snr : {1e-2, 1.0, 1e2, 1e4, 1e8})
    {
        const double g = lmmse_stats(delta, 1, snr).gamma(0, 0);
        CHECK(g > prev);
        CHECK(g < 0.01);
        prev = g;
    }
    CHECK(prev == doctest::Approx(0.01).epsilon(1e-5));
    CHECK_THROWS_AS(lmmse_stats(delta, 1, 0.0), std::invalid_argument);
}

TEST_CASE("aggregated variance")
{
    const Scenario s = small_drop(3, false);
    const double area = s.element_area();
    Rng rng = make_rng(3, 17);
    const RealTensor d0 = aggregated_variance(s, PhaseVector::zeros(s.L()));
    const RealTensor d1 = aggregated_variance(s, PhaseVector::uniform(s.L(), rng));
    for (int m = 0; m < s.M(); ++m)
        for (int k = 0; k < s.K(); ++k)
            for (int n = 0; n < s.N(); ++n)
            {
                const double expected =
                    s.beta_direct(m, k, n) + s.beta_ap_ris[m] * s.beta_ris_user(k, n) * area * area * s.L();
                CHECK(d0(m, k, n) == doctest::Approx(expected).epsilon(1e-13));
                CHECK(d1(m, k, n) == d0(m, k, n));
            }

    const Scenario bare = without_ris(small_drop(4));
    const RealTensor db = aggregated_variance(bare, PhaseVector::uniform(bare.L(), rng));
    CHECK(db.data() == bare.beta_direct.data());

    const Scenario corr = small_drop(5);
    const RealTensor dc = aggregated_variance(corr, PhaseVector::uniform(corr.L(), rng));
    for (size_t i = 0; i < dc.size(); ++i)
        CHECK(dc.data()[i] >= corr.beta_direct.data()[i]);
}

TEST_CASE("reflection trace against the explicit matrix product")
{
    SystemConfig c;
    c.L = 9;
    const Eigen::MatrixXd R = ris_correlation_matrix(c);
    Rng rng = make_rng(6, 1);
    const PhaseVector th = PhaseVector::uniform(9, rng);
    Eigen::VectorXcd e(9);
    for (int i = 0; i < 9; ++i)
        e(i) = std::polar(1.0, th[i]);
    const Eigen::MatrixXcd Th = e.asDiagonal();
    const std::complex<double> tr = (Th * R.cast<std::complex<double>>() * Th.adjoint() * R.cast<std::complex<double>>()).trace();
    CHECK(reflection_trace(R, th) == doctest::Approx(tr.real()).epsilon(1e-12));
    CHECK(std::abs(tr.imag()) < 1e-12);
    CHECK_THROWS_AS(reflection_trace(R, PhaseVector::zeros(4)), std::invalid_argument);
}

TEST_CASE("sampled channels reproduce the second-order statistics")
{
    const Scenario s = testing::strong_ris_scenario(2, 2, 2, 4, 7);
    Rng rng0 = make_rng(7, 2);
    const PhaseVector th = PhaseVector::uniform(s.L(), rng0);
    const ChannelSampler sampler(s, th);
    const ChannelStats &st = sampler.stats();

    const int T = 100000;
    const int M = s.M(), K = s.K(), N = s.N();
    RealTensor u1(M, K, N), u2(M, K, N);
    Eigen::MatrixXd z1 = Eigen::MatrixXd::Zero(M, K), z2 = Eigen::MatrixXd::Zero(M, K);
    Eigen::MatrixXd err_corr = Eigen::MatrixXd::Zero(M, K); // Re E[(z - z_hat) conj(z_hat)]
    Rng rng = make_rng(7, 3);
    for (int t = 0; t < T; ++t)
    {
        const ChannelRealization r = sampler.sample(rng);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
            {
                std::complex<double> z = 0.0;
                for (int n = 0; n < N; ++n)
                {
                    const double a = std::norm(r.u(m, k, n));
                    u1(m, k, n) += a;
                    u2(m, k, n) += a * a;
                    z += r.u(m, k, n);
                }
                const double b = std::norm(r.z_hat(m, k));
                z1(m, k) += b;
                z2(m, k) += b * b;
                err_corr(m, k) += ((z - r.z_hat(m, k)) * std::conj(r.z_hat(m, k))).real();
            }
    }
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k)
        {
            for (int n = 0; n < N; ++n)
            {
                const double mean = u1(m, k, n) / T;
                const double se = std::sqrt((u2(m, k, n) / T - mean * mean) / T);
                CHECK(std::abs(mean - st.delta(m, k, n)) <= 3.0 * se);
            }
            const double mean = z1(m, k) / T;
            const double se = std::sqrt((z2(m, k) / T - mean * mean) / T);
            CHECK(std::abs(mean - st.gamma(m, k)) <= 3.0 * se);
            // estimation error is uncorrelated with the estimate
            CHECK(std::abs(err_corr(m, k) / T) <= 5.0 * se);
        }
}

TEST_CASE("realization parts recompose the aggregate channel")
{
    const Scenario s = small_drop(8);
    Rng rng = make_rng(8, 1);
    const PhaseVector th = PhaseVector::uniform(s.L(), rng);
    const ChannelRealization r = sample_realization(s, th, rng);
    for (int m = 0; m < s.M(); ++m)
        for (int k = 0; k < s.K(); ++k)
            for (int n = 0; n < s.N(); ++n)
            {
                std::complex<double> refl = 0.0;
                for (int i = 0; i < s.L(); ++i)
                    refl += std::conj(r.h(i, k * s.N() + n)) * std::polar(1.0, th[i]) * r.g(i, m);
                CHECK(std::abs(r.u(m, k, n) - r.l(m, k, n) - refl) < 1e-12 * (1.0 + std::abs(r.u(m, k, n))));
            }

    const Scenario bare = without_ris(s);
    Rng rng2 = make_rng(8, 2);
    const ChannelRealization rb = sample_realization(bare, th, rng2);
    for (int m = 0; m < s.M(); ++m)
        for (int k = 0; k < s.K(); ++k)
            for (int n = 0; n < s.N(); ++n)
                CHECK(rb.u(m, k, n) == rb.l(m, k, n));
}

TEST_CASE("PSD factor")
{
    Eigen::MatrixXd A(2, 2);
    A << 1.0, 1.0, 1.0, 1.0 - 1e-14;
    const Eigen::MatrixXd F = psd_factor(A);
    CHECK((F * F.transpose() - A).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::MatrixXd B(2, 2);
    B << 1.0, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(psd_factor(B), std::runtime_error);
}
