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

#ifndef RISCF_SPECTRAL_HPP
#define RISCF_SPECTRAL_HPP

#include "riscf/channels.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace riscf
{
    // SIC decoding order of every cluster. Tensors stay in natural member order;
    // the ordering is a rank map (rank 0 = strongest virtual channel).
    struct Ordering
    {
        std::vector<std::vector<int>> order; // order[k][r] = member at rank r
        std::vector<std::vector<int>> rank;  // rank[k][n]  = rank of member n

        int K() const { return static_cast<int>(order.size()); }
        static Ordering identity(int K, int N);
        static Ordering from_order(std::vector<std::vector<int>> order);
    };

    // Norm of the virtual channel [gamma_mk delta_mkn / sum_p delta_mkp]_m.
    Eigen::MatrixXd virtual_channel_norms(const ChannelStats &stats);

    // Sort each cluster by decreasing virtual-channel norm; ties keep the lower index first.
    Ordering order_users(const ChannelStats &stats);

    // max_m (sum_kn gamma_mk eta_mkn - 1); <= 0 when every per-AP constraint holds.
    double power_constraint_excess(const ChannelStats &stats, const RealTensor &eta);

    // Relative violation of the SIC power ordering sum_m sum_{i before n} eta_mki <= sum_m eta_mkn,
    // maximised over clusters and ranks >= 1; 0 when satisfied.
    double sic_violation(const RealTensor &eta, const Ordering &ordering);

    // Closed-form per-user terms; every matrix is K x N in natural member order.
    struct SEReport
    {
        Eigen::MatrixXd sinr;
        Eigen::MatrixXd ds;
        Eigen::MatrixXd bu;
        Eigen::MatrixXd iaci_i;
        Eigen::MatrixXd iaci_r;
        Eigen::MatrixXd ici;
        Eigen::MatrixXd se;
        double sum_se = 0.0;
        double prelog = 0.0;
        std::vector<std::string> warnings;
    };

    SEReport closed_form_sinr(const ChannelStats &stats, const RealTensor &eta, double rho_d, const Ordering &ordering,
                              double prelog);

    // Sum SE only, without building the report.
    double closed_form_sum_se(const ChannelStats &stats, const RealTensor &eta, double rho_d, const Ordering &ordering,
                              double prelog);

    // Stats, ordering and closed-form report for one operating point.
    SEReport evaluate(const Scenario &scenario, const PhaseVector &theta, const RealTensor &eta);

    struct ErgodicResult
    {
        Eigen::MatrixXd se;        // K x N, prelog applied
        Eigen::MatrixXd se_stderr; // Monte Carlo standard error of se
        double sum_se = 0.0;
        double sum_se_stderr = 0.0;
        int trials = 0;
    };

    // Monte Carlo average of the instantaneous SINR with known channels. Trials are split
    // into fixed blocks with their own RNG stream; the result does not depend on threads.
    ErgodicResult ergodic_se(const Scenario &scenario, const PhaseVector &theta, const RealTensor &eta, int trials,
                             std::uint64_t seed, int threads = 0);

    // Instantaneous SINR of every user for one realization (natural order, K x N).
    Eigen::MatrixXd instantaneous_sinr(const ChannelRealization &r, const ChannelStats &stats, const RealTensor &eta,
                                       double rho_d, const Ordering &ordering);

    // Collocated APs (delta_mkn = delta_kn), shared per-user power, high pilot and
    // transmit power. Terms are normalised by rho_d M delta_kn.
    struct CollocatedTerms
    {
        Eigen::MatrixXd sinr;
        Eigen::MatrixXd ds;
        Eigen::MatrixXd bu;
        Eigen::MatrixXd iaci_i;
        Eigen::MatrixXd iaci_r;
        Eigen::MatrixXd ici;
    };

    // delta: K x N shared variances, eta: K x N shared powers, M: number of APs.
    CollocatedTerms collocated_sinr(const Eigen::MatrixXd &delta, const Eigen::MatrixXd &eta, int M,
                                    const Ordering &ordering);

    // Extracts the shared delta from collocated stats; throws if delta varies across APs.
    Eigen::MatrixXd collocated_delta(const ChannelStats &stats, double rel_tol = 1e-12);

    // One user per cluster, high pilot and transmit power. Returns Gamma_k (length K).
    Eigen::VectorXd single_user_sinr(const ChannelStats &stats, const RealTensor &eta);

    // Every user in its own cluster with equal power allocation; same drop and phases.
    SEReport oma_baseline(const Scenario &scenario, const PhaseVector &theta);

} // namespace riscf

#endif
