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

#include "riscf/spectral.hpp"
#include "riscf/power_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

namespace riscf
{
    Ordering Ordering::identity(int K, int N)
    {
        std::vector<std::vector<int>> order(K, std::vector<int>(N));
        for (auto &o : order)
            std::iota(o.begin(), o.end(), 0);
        return from_order(std::move(order));
    }

    Ordering Ordering::from_order(std::vector<std::vector<int>> order)
    {
        Ordering o;
        o.rank.resize(order.size());
        for (size_t k = 0; k < order.size(); ++k)
        {
            const int N = static_cast<int>(order[k].size());
            o.rank[k].assign(N, -1);
            for (int r = 0; r < N; ++r)
            {
                const int n = order[k][r];
                if (n < 0 || n >= N || o.rank[k][n] != -1)
                    throw std::invalid_argument("Ordering: cluster " + std::to_string(k) + " is not a permutation");
                o.rank[k][n] = r;
            }
        }
        o.order = std::move(order);
        return o;
    }

    Eigen::MatrixXd virtual_channel_norms(const ChannelStats &s)
    {
        const int M = s.M(), K = s.K(), N = s.N();
        Eigen::MatrixXd norm2 = Eigen::MatrixXd::Zero(K, N);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
            {
                double S = 0.0;
                for (int n = 0; n < N; ++n)
                    S += s.delta(m, k, n);
                if (S <= 0.0)
                    continue;
                for (int n = 0; n < N; ++n)
                {
                    const double v = s.gamma(m, k) * s.delta(m, k, n) / S;
                    norm2(k, n) += v * v;
                }
            }
        return norm2.cwiseSqrt();
    }

    Ordering order_users(const ChannelStats &stats)
    {
        const Eigen::MatrixXd norms = virtual_channel_norms(stats);
        const int K = stats.K(), N = stats.N();
        std::vector<std::vector<int>> order(K, std::vector<int>(N));
        for (int k = 0; k < K; ++k)
        {
            std::iota(order[k].begin(), order[k].end(), 0);
            std::stable_sort(order[k].begin(), order[k].end(),
                             [&](int a, int b) { return norms(k, a) > norms(k, b); });
        }
        return Ordering::from_order(std::move(order));
    }

    double power_constraint_excess(const ChannelStats &s, const RealTensor &eta)
    {
        double worst = -1.0;
        for (int m = 0; m < s.M(); ++m)
        {
            double load = 0.0;
            for (int k = 0; k < s.K(); ++k)
                for (int n = 0; n < s.N(); ++n)
                    load += s.gamma(m, k) * eta(m, k, n);
            worst = std::max(worst, load - 1.0);
        }
        return worst;
    }

    double sic_violation(const RealTensor &eta, const Ordering &ordering)
    {
        const int M = eta.M(), K = eta.K(), N = eta.N();
        double worst = 0.0;
        for (int k = 0; k < K; ++k)
        {
            std::vector<double> total(N, 0.0);
            for (int m = 0; m < M; ++m)
                for (int n = 0; n < N; ++n)
                    total[n] += eta(m, k, n);
            double before = 0.0;
            for (int r = 0; r < N; ++r)
            {
                const double own = total[ordering.order[k][r]];
                if (r > 0 && before > own && before > 0.0)
                    worst = std::max(worst, (before - own) / before);
                before += own;
            }
        }
        return worst;
    }

    namespace
    {
        void check_shapes(const ChannelStats &s, const RealTensor &eta, const Ordering &ordering)
        {
            if (!s.delta.same_shape(eta))
                throw std::invalid_argument("power allocation shape does not match channel statistics");
            if (ordering.K() != s.K())
                throw std::invalid_argument("ordering has the wrong number of clusters");
            for (const auto &o : ordering.order)
                if (static_cast<int>(o.size()) != s.N())
                    throw std::invalid_argument("ordering has the wrong cluster size");
            for (double v : eta.data())
                if (!(v >= 0.0) || !std::isfinite(v))
                    throw std::invalid_argument("power coefficients must be finite and nonnegative");
        }

        // Fills the five terms (without prelog) for every user.
        void closed_form_terms(const ChannelStats &s, const RealTensor &eta, double rho, const Ordering &ord,
                               SEReport &rep)
        {
            const int M = s.M(), K = s.K(), N = s.N();
            rep.ds = Eigen::MatrixXd::Zero(K, N);
            rep.bu = Eigen::MatrixXd::Zero(K, N);
            rep.iaci_i = Eigen::MatrixXd::Zero(K, N);
            rep.iaci_r = Eigen::MatrixXd::Zero(K, N);
            rep.ici = Eigen::MatrixXd::Zero(K, N);

            // Per-AP load over every stream: sum_k'n' eta_mk'n' gamma_mk'
            std::vector<double> load(M, 0.0);
            for (int m = 0; m < M; ++m)
                for (int k = 0; k < K; ++k)
                    for (int n = 0; n < N; ++n)
                        load[m] += eta(m, k, n) * s.gamma(m, k);

            // coh(n, j) = sum_m sqrt(eta_mkj) gamma_mk delta_mkn / S_mk
            // inc(n, j) = sum_m eta_mkj delta_mkn gamma_mk
            Eigen::MatrixXd coh(N, N), inc(N, N);
            for (int k = 0; k < K; ++k)
            {
                coh.setZero();
                inc.setZero();
                Eigen::VectorXd other = Eigen::VectorXd::Zero(N);
                for (int m = 0; m < M; ++m)
                {
                    double S = 0.0, own_load = 0.0;
                    for (int n = 0; n < N; ++n)
                    {
                        S += s.delta(m, k, n);
                        own_load += eta(m, k, n) * s.gamma(m, k);
                    }
                    const double g = s.gamma(m, k);
                    for (int n = 0; n < N; ++n)
                    {
                        const double d = s.delta(m, k, n);
                        other(n) += d * (load[m] - own_load);
                        if (S <= 0.0)
                            continue;
                        for (int j = 0; j < N; ++j)
                        {
                            coh(n, j) += std::sqrt(eta(m, k, j)) * g * d / S;
                            inc(n, j) += eta(m, k, j) * d * g;
                        }
                    }
                }
                for (int n = 0; n < N; ++n)
                {
                    const int rn = ord.rank[k][n];
                    rep.ds(k, n) = rho * coh(n, n) * coh(n, n);
                    rep.bu(k, n) = rho * inc(n, n);
                    rep.ici(k, n) = rho * std::max(other(n), 0.0);
                    for (int j = 0; j < N; ++j)
                    {
                        const int rj = ord.rank[k][j];
                        if (rj < rn)
                            rep.iaci_i(k, n) += rho * (coh(n, j) * coh(n, j) + inc(n, j));
                        else if (rj > rn)
                            rep.iaci_r(k, n) += rho * inc(n, j);
                    }
                }
            }
        }
    } // namespace

    SEReport closed_form_sinr(const ChannelStats &stats, const RealTensor &eta, double rho_d, const Ordering &ordering,
                              double prelog)
    {
        check_shapes(stats, eta, ordering);
        SEReport rep;
        rep.prelog = prelog;
        const double excess = power_constraint_excess(stats, eta);
        if (excess > 1e-6)
            rep.warnings.push_back("per-AP power constraint exceeded by " + std::to_string(excess));

        closed_form_terms(stats, eta, rho_d, ordering, rep);
        const int K = stats.K(), N = stats.N();
        rep.sinr.resize(K, N);
        rep.se.resize(K, N);
        for (int k = 0; k < K; ++k)
            for (int n = 0; n < N; ++n)
            {
                const double den = rep.bu(k, n) + rep.iaci_i(k, n) + rep.iaci_r(k, n) + rep.ici(k, n) + 1.0;
                rep.sinr(k, n) = rep.ds(k, n) / den;
                rep.se(k, n) = prelog * std::log2(1.0 + rep.sinr(k, n));
                rep.sum_se += rep.se(k, n);
            }
        return rep;
    }

    double closed_form_sum_se(const ChannelStats &stats, const RealTensor &eta, double rho_d, const Ordering &ordering,
                              double prelog)
    {
        return closed_form_sinr(stats, eta, rho_d, ordering, prelog).sum_se;
    }

    SEReport evaluate(const Scenario &scenario, const PhaseVector &theta, const RealTensor &eta)
    {
        const ChannelStats stats = channel_stats(scenario, theta);
        return closed_form_sinr(stats, eta, scenario.config.rho_d(), order_users(stats), scenario.config.prelog());
    }

    Eigen::MatrixXd instantaneous_sinr(const ChannelRealization &r, const ChannelStats &s, const RealTensor &eta,
                                       double rho, const Ordering &ord)
    {
        const int M = s.M(), K = s.K(), N = s.N();
        Eigen::MatrixXd lambda(K, N);

        // Q_m = sum_k'n' eta_mk'n' |z_hat_mk'|^2
        std::vector<double> Q(M, 0.0);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
            {
                const double z2 = std::norm(r.z_hat(m, k));
                for (int n = 0; n < N; ++n)
                    Q[m] += eta(m, k, n) * z2;
            }

        Eigen::MatrixXcd X(N, N);
        Eigen::MatrixXd mean(N, N);
        Eigen::VectorXd cross(N);
        for (int k = 0; k < K; ++k)
        {
            X.setZero();
            mean.setZero();
            cross.setZero();
            for (int m = 0; m < M; ++m)
            {
                double S = 0.0, own = 0.0;
                for (int n = 0; n < N; ++n)
                {
                    S += s.delta(m, k, n);
                    own += eta(m, k, n);
                }
                const cd zc = std::conj(r.z_hat(m, k));
                const double z2 = std::norm(r.z_hat(m, k));
                for (int n = 0; n < N; ++n)
                {
                    const cd uz = r.u(m, k, n) * zc;
                    const double expected = S > 0.0 ? s.gamma(m, k) * s.delta(m, k, n) / S : 0.0;
                    for (int j = 0; j < N; ++j)
                    {
                        const double a = std::sqrt(eta(m, k, j));
                        X(n, j) += a * uz;
                        mean(n, j) += a * expected;
                    }
                    cross(n) += std::norm(r.u(m, k, n)) * (Q[m] - own * z2);
                }
            }
            for (int n = 0; n < N; ++n)
            {
                const int rn = ord.rank[k][n];
                double interference = rho * std::max(cross(n), 0.0);
                for (int j = 0; j < N; ++j)
                {
                    const int rj = ord.rank[k][j];
                    if (rj < rn)
                        interference += rho * std::norm(X(n, j));
                    else if (rj > rn)
                        interference += rho * std::norm(X(n, j) - mean(n, j));
                }
                lambda(k, n) = rho * std::norm(X(n, n)) / (interference + 1.0);
            }
        }
        return lambda;
    }

    ErgodicResult ergodic_se(const Scenario &scenario, const PhaseVector &theta, const RealTensor &eta, int trials,
                             std::uint64_t seed, int threads)
    {
        if (trials < 1)
            throw std::invalid_argument("ergodic_se: trials must be at least 1");
        const ChannelSampler sampler(scenario, theta);
        const ChannelStats &stats = sampler.stats();
        const Ordering ord = order_users(stats);
        check_shapes(stats, eta, ord);
        const double rho = scenario.config.rho_d();
        const double prelog = scenario.config.prelog();
        const int K = stats.K(), N = stats.N();

        constexpr int block = 64;
        const int blocks = (trials + block - 1) / block;

        struct Partial
        {
            Eigen::MatrixXd sum, sum2;
            double total = 0.0, total2 = 0.0;
        };
        std::vector<Partial> parts(blocks);

        auto run_block = [&](int b)
        {
            Partial p{Eigen::MatrixXd::Zero(K, N), Eigen::MatrixXd::Zero(K, N)};
            Rng rng = make_rng(seed, Stream::monte_carlo, static_cast<std::uint64_t>(b));
            const int first = b * block, last = std::min(trials, first + block);
            for (int t = first; t < last; ++t)
            {
                const ChannelRealization r = sampler.sample(rng);
                const Eigen::MatrixXd lam = instantaneous_sinr(r, stats, eta, rho, ord);
                double trial_sum = 0.0;
                for (int k = 0; k < K; ++k)
                    for (int n = 0; n < N; ++n)
                    {
                        const double v = std::log2(1.0 + lam(k, n));
                        p.sum(k, n) += v;
                        p.sum2(k, n) += v * v;
                        trial_sum += v;
                    }
                p.total += trial_sum;
                p.total2 += trial_sum * trial_sum;
            }
            parts[b] = std::move(p);
        };

        int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
        workers = std::clamp(workers, 1, blocks);
        if (workers == 1)
        {
            for (int b = 0; b < blocks; ++b)
                run_block(b);
        }
        else
        {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w)
                pool.emplace_back(
                    [&, w]
                    {
                        for (int b = w; b < blocks; b += workers)
                            run_block(b);
                    });
            for (auto &t : pool)
                t.join();
        }

        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(K, N), sum2 = Eigen::MatrixXd::Zero(K, N);
        double total = 0.0, total2 = 0.0;
        for (const Partial &p : parts)
        {
            sum += p.sum;
            sum2 += p.sum2;
            total += p.total;
            total2 += p.total2;
        }

        const double T = trials;
        auto stderr_of = [T](double s, double s2)
        {
            if (T < 2)
                return 0.0;
            const double var = std::max(0.0, (s2 - s * s / T) / (T - 1.0));
            return std::sqrt(var / T);
        };

        ErgodicResult res;
        res.trials = trials;
        res.se.resize(K, N);
        res.se_stderr.resize(K, N);
        for (int k = 0; k < K; ++k)
            for (int n = 0; n < N; ++n)
            {
                res.se(k, n) = prelog * sum(k, n) / T;
                res.se_stderr(k, n) = prelog * stderr_of(sum(k, n), sum2(k, n));
            }
        res.sum_se = prelog * total / T;
        res.sum_se_stderr = prelog * stderr_of(total, total2);
        return res;
    }

    CollocatedTerms collocated_sinr(const Eigen::MatrixXd &delta, const Eigen::MatrixXd &eta, int M,
                                    const Ordering &ordering)
    {
        const int K = static_cast<int>(delta.rows()), N = static_cast<int>(delta.cols());
        if (eta.rows() != K || eta.cols() != N)
            throw std::invalid_argument("collocated_sinr: eta shape mismatch");
        if (M < 1)
            throw std::invalid_argument("collocated_sinr: M must be positive");

        const Eigen::VectorXd S = delta.rowwise().sum();
        double all = 0.0;
        for (int k = 0; k < K; ++k)
            for (int n = 0; n < N; ++n)
                all += eta(k, n) * S(k);

        CollocatedTerms t{Eigen::MatrixXd::Zero(K, N), Eigen::MatrixXd::Zero(K, N), Eigen::MatrixXd::Zero(K, N),
                          Eigen::MatrixXd::Zero(K, N), Eigen::MatrixXd::Zero(K, N), Eigen::MatrixXd::Zero(K, N)};
        for (int k = 0; k < K; ++k)
        {
            const double cluster = eta.row(k).sum() * S(k);
            for (int n = 0; n < N; ++n)
            {
                const int rn = ordering.rank[k][n];
                t.ds(k, n) = M * eta(k, n) * delta(k, n);
                t.bu(k, n) = eta(k, n) * S(k);
                t.ici(k, n) = all - cluster;
                for (int j = 0; j < N; ++j)
                {
                    const int rj = ordering.rank[k][j];
                    if (rj < rn)
                        t.iaci_i(k, n) += eta(k, j) * (M * delta(k, n) + S(k));
                    else if (rj > rn)
                        t.iaci_r(k, n) += eta(k, j) * S(k);
                }
                const double den = t.bu(k, n) + t.iaci_i(k, n) + t.iaci_r(k, n) + t.ici(k, n);
                t.sinr(k, n) = den > 0.0 ? t.ds(k, n) / den : 0.0;
            }
        }
        return t;
    }

    Eigen::MatrixXd collocated_delta(const ChannelStats &s, double rel_tol)
    {
        const int M = s.M(), K = s.K(), N = s.N();
        Eigen::MatrixXd d(K, N);
        for (int k = 0; k < K; ++k)
            for (int n = 0; n < N; ++n)
            {
                d(k, n) = s.delta(0, k, n);
                for (int m = 1; m < M; ++m)
                    if (std::abs(s.delta(m, k, n) - d(k, n)) > rel_tol * std::abs(d(k, n)))
                        throw std::invalid_argument("collocated_delta: channel statistics differ across APs");
            }
        return d;
    }

    Eigen::VectorXd single_user_sinr(const ChannelStats &s, const RealTensor &eta)
    {
        if (s.N() != 1)
            throw std::invalid_argument("single_user_sinr: requires one user per cluster");
        if (!s.delta.same_shape(eta))
            throw std::invalid_argument("single_user_sinr: eta shape mismatch");
        const int M = s.M(), K = s.K();
        Eigen::VectorXd out(K);
        for (int k = 0; k < K; ++k)
        {
            double num = 0.0, den = 0.0;
            for (int m = 0; m < M; ++m)
            {
                const double d = s.delta(m, k, 0);
                num += std::sqrt(eta(m, k, 0)) * d;
                den += eta(m, k, 0) * d * d;
                for (int j = 0; j < K; ++j)
                    if (j != k)
                        den += eta(m, j, 0) * d * s.delta(m, j, 0);
            }
            out(k) = den > 0.0 ? num * num / den : 0.0;
        }
        return out;
    }

    SEReport oma_baseline(const Scenario &scenario, const PhaseVector &theta)
    {
        const Scenario orth = as_orthogonal(scenario);
        const ChannelStats stats = channel_stats(orth, theta);
        const RealTensor eta = equal_power_allocation(stats);
        return closed_form_sinr(stats, eta, orth.config.rho_d(), order_users(stats), orth.config.prelog());
    }

} // namespace riscf
