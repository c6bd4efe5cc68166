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

// Fixtures shared by the unit tests and the acceptance runner.

#ifndef RISCF_TESTS_SUPPORT_HPP
#define RISCF_TESTS_SUPPORT_HPP

#include "riscf/joint.hpp"

#include <cmath>
#include <cstdint>

namespace riscf::testing
{
    // Hand-built statistics; c is filled from the LMMSE relation for the given pilot SNR.
    inline ChannelStats make_stats(const RealTensor &delta, double pilot_snr)
    {
        ChannelStats s;
        s.delta = delta;
        LmmseStats ls = lmmse_stats(delta, 1, pilot_snr);
        s.c = ls.c;
        s.gamma = ls.gamma;
        return s;
    }

    inline ChannelStats make_stats(const RealTensor &delta, const Eigen::MatrixXd &gamma)
    {
        ChannelStats s;
        s.delta = delta;
        s.gamma = gamma;
        s.c = Eigen::MatrixXd::Zero(gamma.rows(), gamma.cols());
        return s;
    }

    // Drop whose reflected path is comparable to the direct one, so the phases matter.
    // Gains are O(1) and rho_d = rho_p = 10 (10 dBm over a 0 dBm noise floor).
    inline Scenario strong_ris_scenario(int M, int K, int N, int L, std::uint64_t seed)
    {
        SystemConfig c;
        c.M = M;
        c.K = K;
        c.N = N;
        c.L = L;
        c.tau_p = std::max(K, 1);
        c.tau_c = std::max(100, 2 * c.tau_p);
        c.noise_dbm = 0.0;
        c.rho_d_dbm = 10.0;
        c.rho_p_dbm = 10.0;
        c.seed = seed;
        Rng rng = make_rng(seed, 99);
        std::uniform_real_distribution<double> u(0.5, 1.5);
        const double area = c.d_H * c.d_V;
        // beta_mr * beta_rkn * area^2 * L is about the size of beta_direct
        const double hop = 1.0 / (area * std::sqrt(static_cast<double>(L)));
        RealTensor direct(M, K, N);
        for (double &v : direct.data())
            v = 0.05 * u(rng);
        std::vector<double> ap_ris(M);
        for (double &v : ap_ris)
            v = hop * u(rng);
        Eigen::MatrixXd ris_user(K, N);
        for (int k = 0; k < K; ++k)
            for (int n = 0; n < N; ++n)
                ris_user(k, n) = hop * u(rng);
        return make_scenario(c, std::move(direct), std::move(ap_ris), std::move(ris_user), ris_correlation_matrix(c));
    }

    inline double relative_difference(double a, double b)
    {
        const double scale = std::max(std::abs(a), std::abs(b));
        return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
    }
}

#endif
