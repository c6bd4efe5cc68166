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

#include "riscf/scenario.hpp"
#include "riscf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace riscf
{
    namespace
    {
        constexpr int kMaxPlacementAttempts = 10000;

        double sinc(double x)
        {
            if (x == 0.0)
                return 1.0;
            const double px = std::numbers::pi * x;
            return std::sin(px) / px;
        }

        double gain_from_db(double db) { return std::pow(10.0, db / 10.0); }

        void require(bool ok, const std::string &what)
        {
            if (!ok)
                throw std::invalid_argument("invalid scenario: " + what);
        }

        Clustering identity_clusters(int K, int N)
        {
            Clustering c(K, std::vector<int>(N));
            for (int k = 0; k < K; ++k)
                for (int n = 0; n < N; ++n)
                    c[k][n] = k * N + n;
            return c;
        }
    } // namespace

    double hata_attenuation_db(double carrier_hz, double ap_height, double user_height)
    {
        const double f = std::log10(carrier_hz / 1e6);
        return 46.3 + 33.9 * f - 13.82 * std::log10(ap_height) - (1.1 * f - 0.7) * user_height + (1.56 * f - 0.8);
    }

    PathLossModel path_loss_model(const SystemConfig &config)
    {
        PathLossModel model;
        model.attenuation_db = hata_attenuation_db(config.carrier_hz, config.ap_height, config.user_height);
        return model;
    }

    double three_slope_path_loss(double distance_3d, const PathLossModel &model)
    {
        if (!(distance_3d > 0.0) || !std::isfinite(distance_3d))
            throw std::invalid_argument("three_slope_path_loss: distance must be positive and finite");

        const double d_km = distance_3d / 1000.0;
        const double d0_km = model.d0 / 1000.0;
        const double d1_km = model.d1 / 1000.0;
        if (distance_3d > model.d1)
            return -model.attenuation_db - 35.0 * std::log10(d_km);
        if (distance_3d > model.d0)
            return -model.attenuation_db - 15.0 * std::log10(d1_km) - 20.0 * std::log10(d_km);
        return -model.attenuation_db - 15.0 * std::log10(d1_km) - 20.0 * std::log10(d0_km);
    }

    Eigen::MatrixXd ris_correlation_matrix(const SystemConfig &config)
    {
        const int L = config.L;
        if (!config.correlated)
            return Eigen::MatrixXd::Identity(L, L);

        const RisGrid grid = ris_grid(L);
        const double lambda = config.lambda_c();
        Eigen::MatrixXd R(L, L);
        for (int i = 0; i < L; ++i)
        {
            const double xi = (i % grid.horizontal) * config.d_H;
            const double yi = (i / grid.horizontal) * config.d_V;
            for (int j = 0; j <= i; ++j)
            {
                const double xj = (j % grid.horizontal) * config.d_H;
                const double yj = (j / grid.horizontal) * config.d_V;
                const double v = sinc(2.0 * std::hypot(xi - xj, yi - yj) / lambda);
                R(i, j) = v;
                R(j, i) = v;
            }
        }
        return R;
    }

    Clustering cluster_users(std::span<const Point2> users, int N)
    {
        const int U = static_cast<int>(users.size());
        if (N < 1 || U % N != 0)
            throw std::invalid_argument("cluster_users: user count must be a multiple of N");

        std::vector<bool> taken(U, false);
        Clustering clusters;
        clusters.reserve(U / N);
        for (int seed = 0; seed < U; ++seed)
        {
            if (taken[seed])
                continue;
            taken[seed] = true;
            std::vector<int> members{seed};

            std::vector<int> candidates;
            for (int u = 0; u < U; ++u)
                if (!taken[u])
                    candidates.push_back(u);
            // stable_sort keeps the lower index first among equal distances
            std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b)
                             { return distance(users[seed], users[a]) < distance(users[seed], users[b]); });
            for (int i = 0; i < N - 1; ++i)
            {
                members.push_back(candidates[i]);
                taken[candidates[i]] = true;
            }
            clusters.push_back(std::move(members));
        }
        return clusters;
    }

    void Scenario::validate() const
    {
        config.validate();
        const int M = config.M, K = config.K, N = config.N, L = config.L;

        require(beta_direct.M() == M && beta_direct.K() == K && beta_direct.N() == N, "beta_direct shape");
        for (double b : beta_direct.data())
            require(std::isfinite(b) && b > 0.0, "beta_direct entries must be positive and finite");
        require(static_cast<int>(beta_ap_ris.size()) == M, "beta_ap_ris length");
        for (double b : beta_ap_ris)
            require(std::isfinite(b) && b >= 0.0, "beta_ap_ris entries must be finite and non-negative");
        require(beta_ris_user.rows() == K && beta_ris_user.cols() == N, "beta_ris_user shape");
        require(beta_ris_user.allFinite() && (beta_ris_user.array() >= 0.0).all(), "beta_ris_user entries");

        require(corr.rows() == L && corr.cols() == L, "corr shape");
        require(corr.allFinite(), "corr entries must be finite");
        require((corr - corr.transpose()).cwiseAbs().maxCoeff() == 0.0, "corr must be symmetric");
        for (int i = 0; i < L; ++i)
            require(std::abs(corr(i, i) - 1.0) < 1e-12, "corr must have unit diagonal");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr, Eigen::EigenvaluesOnly);
        require(eig.eigenvalues().minCoeff() >= -1e-9, "corr must be positive semidefinite");

        require(static_cast<int>(clusters.size()) == K, "cluster count");
        std::vector<int> seen;
        for (const auto &c : clusters)
        {
            require(static_cast<int>(c.size()) == N, "cluster size");
            seen.insert(seen.end(), c.begin(), c.end());
        }
        std::sort(seen.begin(), seen.end());
        require(std::adjacent_find(seen.begin(), seen.end()) == seen.end(), "clusters must hold distinct users");
        require(seen.front() >= 0 && seen.back() < K * N, "cluster member index out of range");

        if (!user_positions.empty())
        {
            require(static_cast<int>(user_positions.size()) == K * N, "user_positions length");
            for (const auto &p : user_positions)
                require(distance(p, ris_position) >= config.d_min, "user inside the RIS exclusion radius");
        }
        if (!ap_positions.empty())
            require(static_cast<int>(ap_positions.size()) == M, "ap_positions length");
    }

    Scenario generate_scenario(const SystemConfig &config)
    {
        config.validate();
        const int M = config.M, K = config.K, N = config.N, U = config.users();
        Rng rng = make_rng(config.seed, Stream::scenario);
        std::uniform_real_distribution<double> coord(-config.area_half_width, config.area_half_width);
        std::normal_distribution<double> gauss(0.0, 1.0);

        Scenario s;
        s.config = config;
        s.ris_position = config.ris_position;

        s.ap_positions.resize(M);
        for (auto &p : s.ap_positions)
        {
            p.x = coord(rng);
            p.y = coord(rng);
        }

        s.user_positions.resize(U);
        for (int u = 0; u < U; ++u)
        {
            int attempt = 0;
            for (;; ++attempt)
            {
                if (attempt == kMaxPlacementAttempts)
                    throw std::runtime_error("generate_scenario: could not place user " + std::to_string(u) +
                                             " outside d_min after " + std::to_string(kMaxPlacementAttempts) +
                                             " attempts (degenerate geometry)");
                Point2 p{coord(rng), coord(rng)};
                if (distance(p, config.ris_position) >= config.d_min)
                {
                    s.user_positions[u] = p;
                    break;
                }
            }
        }

        s.clusters = cluster_users(s.user_positions, N);

        const PathLossModel model = path_loss_model(config);
        auto link_gain = [&](const Point2 &a, const Point2 &b, double dh, double sigma)
        {
            const double d3 = std::hypot(distance(a, b), dh);
            return gain_from_db(three_slope_path_loss(d3, model) + sigma * gauss(rng));
        };

        // Draw shadowing in user-index order so the clustering never changes the draws.
        std::vector<double> direct(static_cast<std::size_t>(M) * U);
        for (int m = 0; m < M; ++m)
            for (int u = 0; u < U; ++u)
                direct[static_cast<std::size_t>(m) * U + u] =
                    link_gain(s.ap_positions[m], s.user_positions[u], config.ap_height - config.user_height,
                              config.sigma_sh_direct);

        s.beta_ap_ris.resize(M);
        for (int m = 0; m < M; ++m)
            s.beta_ap_ris[m] = link_gain(s.ap_positions[m], s.ris_position, config.ap_height - config.ris_height,
                                         config.sigma_sh_ris);

        std::vector<double> ris_user(U);
        for (int u = 0; u < U; ++u)
            ris_user[u] = link_gain(s.ris_position, s.user_positions[u], config.ris_height - config.user_height,
                                    config.sigma_sh_ris);

        s.beta_direct = RealTensor(M, K, N);
        s.beta_ris_user.resize(K, N);
        for (int k = 0; k < K; ++k)
            for (int n = 0; n < N; ++n)
            {
                const int u = s.clusters[k][n];
                for (int m = 0; m < M; ++m)
                    s.beta_direct(m, k, n) = direct[static_cast<std::size_t>(m) * U + u];
                s.beta_ris_user(k, n) = ris_user[u];
            }

        s.corr = ris_correlation_matrix(config);
        return s;
    }

    Scenario without_ris(const Scenario &scenario)
    {
        Scenario s = scenario;
        std::fill(s.beta_ap_ris.begin(), s.beta_ap_ris.end(), 0.0);
        return s;
    }

    Scenario as_orthogonal(const Scenario &scenario)
    {
        const SystemConfig &c = scenario.config;
        const int users = c.users();
        if (users >= c.tau_c)
            throw std::invalid_argument("as_orthogonal: K*N = " + std::to_string(users) +
                                        " must be < tau_c = " + std::to_string(c.tau_c));

        Scenario s;
        s.config = c;
        s.config.K = users;
        s.config.N = 1;
        s.config.tau_p = users;
        s.ap_positions = scenario.ap_positions;
        s.user_positions = scenario.user_positions;
        s.ris_position = scenario.ris_position;
        s.beta_ap_ris = scenario.beta_ap_ris;
        s.corr = scenario.corr;

        s.beta_direct = RealTensor(c.M, users, 1);
        s.beta_ris_user.resize(users, 1);
        s.clusters.assign(users, std::vector<int>(1));
        for (int k = 0; k < c.K; ++k)
            for (int n = 0; n < c.N; ++n)
            {
                const int kp = k * c.N + n;
                s.clusters[kp][0] = scenario.clusters[k][n];
                s.beta_ris_user(kp, 0) = scenario.beta_ris_user(k, n);
                for (int m = 0; m < c.M; ++m)
                    s.beta_direct(m, kp, 0) = scenario.beta_direct(m, k, n);
            }
        return s;
    }

    Scenario make_scenario(const SystemConfig &config, RealTensor beta_direct, std::vector<double> beta_ap_ris,
                           Eigen::MatrixXd beta_ris_user, Eigen::MatrixXd corr)
    {
        Scenario s;
        s.config = config;
        s.ris_position = config.ris_position;
        s.beta_direct = std::move(beta_direct);
        s.beta_ap_ris = std::move(beta_ap_ris);
        s.beta_ris_user = std::move(beta_ris_user);
        s.corr = std::move(corr);
        s.clusters = identity_clusters(config.K, config.N);
        s.validate();
        return s;
    }

} // namespace riscf
