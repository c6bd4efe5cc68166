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

#ifndef RISCF_POWER_OPT_HPP
#define RISCF_POWER_OPT_HPP

#include "riscf/spectral.hpp"

#include <vector>

namespace riscf
{
    // eta_mkn = 1 / (N sum_k' gamma_mk'); rows of an AP with no estimate gain stay 0.
    RealTensor equal_power_allocation(const ChannelStats &stats);

    // Geometric in-cluster shares 1, 1, 2, 4, ... by SIC rank, scaled so every AP
    // meets its power constraint with equality. Satisfies the SIC power ordering exactly.
    RealTensor sic_feasible_allocation(const ChannelStats &stats, const Ordering &ordering);

    // QT auxiliary variables w_kn = sqrt(Psi_kn) / Omega_kn at eta = xi^2 (K x N).
    Eigen::MatrixXd qt_aux_update(const RealTensor &xi, const ChannelStats &stats, double rho_d,
                                  const Ordering &ordering);

    // prelog * sum_kn log2(1 + 2 w sqrt(Psi) - w^2 Omega); -infinity if any argument is <= 0.
    double qt_surrogate(const RealTensor &xi, const Eigen::MatrixXd &w, const ChannelStats &stats, double rho_d,
                        const Ordering &ordering, double prelog);

    // Gradient of qt_surrogate with respect to xi_m (length K*N, index k*N + n).
    std::vector<double> qt_block_gradient(int m, const RealTensor &xi, const Eigen::MatrixXd &w,
                                          const ChannelStats &stats, double rho_d, const Ordering &ordering,
                                          double prelog);

    struct BlockOptions
    {
        double penalty_weight = 0.0; // exterior penalty on the QoS and SIC constraints
        double r_min = 0.1;          // bits/s/Hz
        int max_iterations = 200;
        double armijo = 1e-4;
        double shrink = 0.5;
    };

    // Projected gradient ascent of the (penalised) surrogate over block m with w fixed.
    // Returns the new xi_m (length K*N).
    std::vector<double> solve_block(int m, const RealTensor &xi, const Eigen::MatrixXd &w, const ChannelStats &stats,
                                    double rho_d, const Ordering &ordering, double prelog,
                                    const BlockOptions &options = {});

    struct QtParams
    {
        double zeta = 1e-6;
        int J1 = 50;
        int J2 = 20;
        double r_min = 0.1;
        double penalty_start = 1.0;
        double penalty_end = 1e3;
        int penalty_ramp = 10; // outer iterations to reach penalty_end
        double sic_tolerance = 1e-4;
        bool repair_initial_sic = true;
        int block_iterations = 200;
    };

    struct QtTraceRow
    {
        int iteration = 0;
        int block = 0;
        double surrogate = 0.0;
        double true_se = 0.0;
        double max_violation = 0.0;
    };

    struct QtResult
    {
        RealTensor eta;
        std::vector<QtTraceRow> trace;
        double sum_se = 0.0;
        int iterations = 0;
        bool converged = false;
        bool truncated = false;
        double power_excess = 0.0;  // max_m sum gamma eta - 1
        double sic_violation = 0.0; // relative
        double qos_shortfall = 0.0; // max_kn (R_min - log2(1 + Gamma))^+
    };

    QtResult successive_qt(const ChannelStats &stats, double rho_d, const Ordering &ordering, double prelog,
                           const RealTensor &init, const QtParams &params = {});

} // namespace riscf

#endif
