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

#ifndef RISCF_CHANNELS_HPP
#define RISCF_CHANNELS_HPP

#include "riscf/rng.hpp"
#include "riscf/scenario.hpp"
#include "riscf/tensor.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace riscf
{
    using cd = std::complex<double>;
    using ComplexTensor = Tensor3<cd>;

    // Canonical representative of an angle in [0, 2*pi).
    double wrap_phase(double angle);

    // RIS phase shifts, one per element, always stored wrapped into [0, 2*pi).
    class PhaseVector
    {
    public:
        PhaseVector() = default;
        explicit PhaseVector(std::vector<double> angles);

        static PhaseVector zeros(int L) { return PhaseVector(std::vector<double>(L, 0.0)); }
        static PhaseVector uniform(int L, Rng &rng);

        int size() const { return static_cast<int>(theta_.size()); }
        double operator[](int i) const { return theta_[i]; }
        const std::vector<double> &values() const { return theta_; }

        bool operator==(const PhaseVector &) const = default;

    private:
        std::vector<double> theta_;
    };

    // Statistics that every closed-form expression consumes, for one phase vector.
    struct ChannelStats
    {
        RealTensor delta;      // M x K x N aggregated-channel variances
        Eigen::MatrixXd c;     // M x K LMMSE scalars
        Eigen::MatrixXd gamma; // M x K estimate variances E|z_hat|^2
        PhaseVector theta;

        int M() const { return delta.M(); }
        int K() const { return delta.K(); }
        int N() const { return delta.N(); }
    };

    // Tr(Theta R Theta^H R) for a real symmetric R: sum_ij R_ij^2 cos(theta_i - theta_j).
    double reflection_trace(const Eigen::MatrixXd &corr, const PhaseVector &theta);

    // delta_mkn = beta_mkn + beta_mr * beta_rkn * (d_H d_V)^2 * Tr(Theta R Theta^H R).
    RealTensor aggregated_variance(const Scenario &scenario, const PhaseVector &theta);

    struct LmmseStats
    {
        Eigen::MatrixXd c;
        Eigen::MatrixXd gamma;
    };

    // Per (AP, cluster) LMMSE scaling and estimate variance of the cluster-sum channel.
    // A dead link (sum of variances 0) yields c = gamma = 0.
    LmmseStats lmmse_stats(const RealTensor &delta, int tau_p, double rho_p);

    ChannelStats channel_stats(const Scenario &scenario, const PhaseVector &theta);

    // One small-scale fading draw. g holds the AP->RIS channels as columns (L x M),
    // h the RIS->user channels as columns (L x K*N, user index k*N + n).
    struct ChannelRealization
    {
        ComplexTensor l;
        Eigen::MatrixXcd g;
        Eigen::MatrixXcd h;
        ComplexTensor u;
        Eigen::MatrixXcd z_hat; // M x K
    };

    // Holds the correlation factor and statistics for repeated draws under one
    // (scenario, theta). Read-only after construction; sample() may be called
    // concurrently with distinct Rng objects.
    class ChannelSampler
    {
    public:
        ChannelSampler(const Scenario &scenario, const PhaseVector &theta);

        ChannelRealization sample(Rng &rng) const;
        const ChannelStats &stats() const { return stats_; }

    private:
        const Scenario *scenario_;
        ChannelStats stats_;
        Eigen::MatrixXd factor_; // F with F F^T = d_H d_V corr
        Eigen::VectorXcd phase_; // e^{j theta}
        double pilot_gain_;      // sqrt(tau_p rho_p)
    };

    ChannelRealization sample_realization(const Scenario &scenario, const PhaseVector &theta, Rng &rng);

    // F with F F^T = A for a symmetric PSD A; eigenvalues in [-tol, 0) are clipped.
    // Throws std::runtime_error if A is not PSD within tol.
    Eigen::MatrixXd psd_factor(const Eigen::MatrixXd &A, double tol = 1e-9);

} // namespace riscf

#endif
