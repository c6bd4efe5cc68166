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

#ifndef RISCF_SCENARIO_HPP
#define RISCF_SCENARIO_HPP

#include "riscf/config.hpp"
#include "riscf/tensor.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace riscf
{
    // clusters[k][n] is the index into Scenario::user_positions of the n-th member of cluster k.
    using Clustering = std::vector<std::vector<int>>;

    // Frozen geometry and large-scale statistics of one drop. Immutable after
    // generation; every per-user array is indexed by (cluster, member).
    struct Scenario
    {
        SystemConfig config;
        std::vector<Point2> ap_positions;   // M
        std::vector<Point2> user_positions; // K*N, in draw order
        Point2 ris_position;
        RealTensor beta_direct;             // M x K x N, linear
        std::vector<double> beta_ap_ris;    // M, linear
        Eigen::MatrixXd beta_ris_user;      // K x N, linear
        Eigen::MatrixXd corr;               // L x L, real symmetric, unit diagonal
        Clustering clusters;

        int M() const { return config.M; }
        int K() const { return config.K; }
        int N() const { return config.N; }
        int L() const { return config.L; }
        double element_area() const { return config.d_H * config.d_V; }

        // Throws std::invalid_argument when a structural invariant is broken.
        // Zero RIS-hop gains are allowed (no-RIS variants).
        void validate() const;
    };

    // Three-slope model; distances in meters, result in dB (a negative gain).
    //   d > d1       : -A - 35 log10(d/km)
    //   d0 < d <= d1 : -A - 15 log10(d1/km) - 20 log10(d/km)
    //   d <= d0      : -A - 15 log10(d1/km) - 20 log10(d0/km)
    struct PathLossModel
    {
        double attenuation_db = 140.7;
        double d0 = 10.0;
        double d1 = 50.0;
    };

    // Hata-COST231 constant A for carrier (Hz) and antenna heights (m).
    double hata_attenuation_db(double carrier_hz, double ap_height, double user_height);
    PathLossModel path_loss_model(const SystemConfig &config);

    double three_slope_path_loss(double distance_3d, const PathLossModel &model = {});

    // sinc(2 |p_i - p_j| / lambda) over an L_H x L_V element grid (identity when
    // config.correlated is false).
    Eigen::MatrixXd ris_correlation_matrix(const SystemConfig &config);

    // Greedy nearest-neighbour grouping into clusters of N; ties go to the lower index.
    Clustering cluster_users(std::span<const Point2> users, int N);

    Scenario generate_scenario(const SystemConfig &config);

    // Copy with every AP->RIS gain zeroed (direct links only).
    Scenario without_ris(const Scenario &scenario);

    // Same drop with every user in its own cluster: K' = K*N, N' = 1, tau_p' = K*N.
    Scenario as_orthogonal(const Scenario &scenario);

    // Drop with explicitly supplied large-scale gains; used by tests and by file loading.
    Scenario make_scenario(const SystemConfig &config, RealTensor beta_direct, std::vector<double> beta_ap_ris,
                           Eigen::MatrixXd beta_ris_user, Eigen::MatrixXd corr);

} // namespace riscf

#endif
