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

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace riscf
{
    double wrap_phase(double angle)
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double r = std::fmod(angle, two_pi);
        if (r < 0.0)
            r += two_pi;
        // fmod of a value just below a multiple of 2*pi can round up to 2*pi
        if (r >= two_pi)
            r = 0.0;
        return r;
    }

    PhaseVector::PhaseVector(std::vector<double> angles) : theta_(std::move(angles))
    {
        for (double &a : theta_)
        {
            if (!std::isfinite(a))
                throw std::invalid_argument("PhaseVector: non-finite phase");
            a = wrap_phase(a);
        }
    }

    PhaseVector PhaseVector::uniform(int L, Rng &rng)
    {
        std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
        std::vector<double> a(L);
        for (double &x : a)
            x = dist(rng);
        return PhaseVector(std::move(a));
    }

    double reflection_trace(const Eigen::MatrixXd &corr, const PhaseVector &theta)
    {
        const int L = static_cast<int>(corr.rows());
        if (theta.size() != L)
            throw std::invalid_argument("reflection_trace: theta has " + std::to_string(theta.size()) +
                                        " entries, expected " + std::to_string(L));
        // Diagonal exactly, off-diagonal via sum_ij R_ij^2 (c_i c_j + s_i s_j)
        Eigen::VectorXd cs(L), sn(L);
        for (int i = 0; i < L; ++i)
        {
            cs(i) = std::cos(theta[i]);
            sn(i) = std::sin(theta[i]);
        }
        Eigen::MatrixXd R2 = corr.cwiseAbs2();
        const double diagonal = R2.diagonal().sum();
        R2.diagonal().setZero();
        return diagonal + cs.dot(R2 * cs) + sn.dot(R2 * sn);
    }

    RealTensor aggregated_variance(const Scenario &scenario, const PhaseVector &theta)
    {
        const int M = scenario.M(), K = scenario.K(), N = scenario.N();
        const double area = scenario.element_area();
        const double reflected = area * area * reflection_trace(scenario.corr, theta);

        RealTensor delta(M, K, N);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                for (int n = 0; n < N; ++n)
                    delta(m, k, n) = scenario.beta_direct(m, k, n) +
                                     scenario.beta_ap_ris[m] * scenario.beta_ris_user(k, n) * reflected;
        return delta;
    }

    LmmseStats lmmse_stats(const RealTensor &delta, int tau_p, double rho_p)
    {
        const double snr = tau_p * rho_p;
        if (!(snr > 0.0))
            throw std::invalid_argument("lmmse_stats: tau_p * rho_p must be positive");
        const double a = std::sqrt(snr);

        const int M = delta.M(), K = delta.K(), N = delta.N();
        LmmseStats out{Eigen::MatrixXd::Zero(M, K), Eigen::MatrixXd::Zero(M, K)};
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
            {
                double S = 0.0;
                for (int n = 0; n < N; ++n)
                    S += delta(m, k, n);
                if (S <= 0.0)
                    continue;
                out.c(m, k) = a * S / (snr * S + 1.0);
                out.gamma(m, k) = snr * S * S / (snr * S + 1.0);
            }
        return out;
    }

    ChannelStats channel_stats(const Scenario &scenario, const PhaseVector &theta)
    {
        ChannelStats s;
        s.delta = aggregated_variance(scenario, theta);
        LmmseStats ls = lmmse_stats(s.delta, scenario.config.tau_p, scenario.config.rho_p());
        s.c = std::move(ls.c);
        s.gamma = std::move(ls.gamma);
        s.theta = theta;
        return s;
    }

    Eigen::MatrixXd psd_factor(const Eigen::MatrixXd &A, double tol)
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
        if (eig.info() != Eigen::Success)
            throw std::runtime_error("psd_factor: eigendecomposition failed");
        Eigen::VectorXd lam = eig.eigenvalues();
        const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
        for (int i = 0; i < lam.size(); ++i)
        {
            if (lam(i) < -tol * scale)
                throw std::runtime_error("psd_factor: matrix is not positive semidefinite (eigenvalue " +
                                         std::to_string(lam(i)) + ")");
            lam(i) = std::sqrt(std::max(lam(i), 0.0));
        }
        return eig.eigenvectors() * lam.asDiagonal();
    }

    ChannelSampler::ChannelSampler(const Scenario &scenario, const PhaseVector &theta)
        : scenario_(&scenario),
          stats_(channel_stats(scenario, theta)),
          factor_(psd_factor(scenario.element_area() * scenario.corr)),
          phase_(theta.size()),
          pilot_gain_(std::sqrt(scenario.config.tau_p * scenario.config.rho_p()))
    {
        for (int i = 0; i < theta.size(); ++i)
            phase_(i) = std::polar(1.0, theta[i]);
    }

    ChannelRealization ChannelSampler::sample(Rng &rng) const
    {
        const Scenario &s = *scenario_;
        const int M = s.M(), K = s.K(), N = s.N(), L = s.L();

        ChannelRealization r;
        r.l = ComplexTensor(M, K, N);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                for (int n = 0; n < N; ++n)
                    r.l(m, k, n) = std::sqrt(s.beta_direct(m, k, n)) * complex_normal(rng);

        Eigen::MatrixXcd white(L, M);
        for (int m = 0; m < M; ++m)
            for (int i = 0; i < L; ++i)
                white(i, m) = complex_normal(rng);
        r.g = factor_.cast<cd>() * white;
        for (int m = 0; m < M; ++m)
            r.g.col(m) *= std::sqrt(s.beta_ap_ris[m]);

        Eigen::MatrixXcd white_h(L, K * N);
        for (int j = 0; j < K * N; ++j)
            for (int i = 0; i < L; ++i)
                white_h(i, j) = complex_normal(rng);
        r.h = factor_.cast<cd>() * white_h;
        for (int k = 0; k < K; ++k)
            for (int n = 0; n < N; ++n)
                r.h.col(k * N + n) *= std::sqrt(s.beta_ris_user(k, n));

        // reflected(j, m) = h_j^H diag(e^{j theta}) g_m
        const Eigen::MatrixXcd reflected = r.h.adjoint() * phase_.asDiagonal() * r.g;

        r.u = ComplexTensor(M, K, N);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                for (int n = 0; n < N; ++n)
                    r.u(m, k, n) = r.l(m, k, n) + reflected(k * N + n, m);

        r.z_hat.resize(M, K);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
            {
                cd sum = 0.0;
                for (int n = 0; n < N; ++n)
                    sum += r.u(m, k, n);
                r.z_hat(m, k) = stats_.c(m, k) * (pilot_gain_ * sum + complex_normal(rng));
            }
        return r;
    }

    ChannelRealization sample_realization(const Scenario &scenario, const PhaseVector &theta, Rng &rng)
    {
        return ChannelSampler(scenario, theta).sample(rng);
    }

} // namespace riscf
