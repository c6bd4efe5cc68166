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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace riscf
{
    RealTensor equal_power_allocation(const ChannelStats &s)
    {
        const int M = s.M(), K = s.K(), N = s.N();
        RealTensor eta(M, K, N);
        for (int m = 0; m < M; ++m)
        {
            const double load = s.gamma.row(m).sum();
            if (load <= 0.0)
                continue;
            for (int k = 0; k < K; ++k)
                for (int n = 0; n < N; ++n)
                    eta(m, k, n) = 1.0 / (N * load);
        }
        return eta;
    }

    RealTensor sic_feasible_allocation(const ChannelStats &s, const Ordering &ord)
    {
        const int M = s.M(), K = s.K(), N = s.N();
        std::vector<double> share(N);
        double share_sum = 0.0;
        for (int r = 0; r < N; ++r)
        {
            share[r] = r == 0 ? 1.0 : std::ldexp(1.0, r - 1);
            share_sum += share[r];
        }
        RealTensor eta(M, K, N);
        for (int m = 0; m < M; ++m)
        {
            const double load = s.gamma.row(m).sum();
            if (load <= 0.0)
                continue;
            for (int k = 0; k < K; ++k)
                for (int n = 0; n < N; ++n)
                    eta(m, k, n) = share[ord.rank[k][n]] / (share_sum * load);
        }
        return eta;
    }

    namespace
    {
        constexpr double kNegInf = -std::numeric_limits<double>::infinity();

        // Sum SE and its QT surrogate in the normalised variables x_mkn = sqrt(gamma_mk eta_mkn),
        // for which every per-AP constraint is the unit ball ||x_m|| <= 1. Caches
        //   C(k, n, j) = sum_m A_mkn x_mkj,  A_mkn = sqrt(rho gamma_mk) delta_mkn / S_mk
        //   P_m        = ||x_m||^2
        //   I(k, n)    = rho sum_m delta_mkn P_m
        //   E(k, n)    = sum_m x_mkn^2 / gamma_mk  (total eta of the user)
        // so sqrt(Psi_kn) = C(k, n, n) and Omega_kn = I(k, n) + sum_{j before n} C(k, n, j)^2 + 1.
        class QtModel
        {
        public:
            QtModel(const ChannelStats &s, double rho, const Ordering &ord, double prelog)
                : s_(s), ord_(ord), rho_(rho), prelog_(prelog), M_(s.M()), K_(s.K()), N_(s.N()), A_(M_, K_, N_),
                  x_(M_, K_, N_), C_(static_cast<size_t>(K_) * N_ * N_, 0.0), P_(M_, 0.0), I_(K_ * N_, 0.0),
                  E_(K_ * N_, 0.0)
            {
                if (ord.K() != K_)
                    throw std::invalid_argument("ordering has the wrong number of clusters");
                for (int m = 0; m < M_; ++m)
                    for (int k = 0; k < K_; ++k)
                    {
                        double S = 0.0;
                        for (int n = 0; n < N_; ++n)
                            S += s.delta(m, k, n);
                        if (!active(m, k) || S <= 0.0)
                            continue;
                        for (int n = 0; n < N_; ++n)
                            A_(m, k, n) = std::sqrt(rho * s.gamma(m, k)) * s.delta(m, k, n) / S;
                    }
            }

            int M() const { return M_; }
            int K() const { return K_; }
            int N() const { return N_; }
            bool active(int m, int k) const { return s_.gamma(m, k) > 0.0; }
            const RealTensor &x() const { return x_; }

            void set_eta(const RealTensor &eta)
            {
                if (!eta.same_shape(x_))
                    throw std::invalid_argument("power allocation shape does not match channel statistics");
                for (int m = 0; m < M_; ++m)
                    for (int k = 0; k < K_; ++k)
                        for (int n = 0; n < N_; ++n)
                        {
                            const double e = eta(m, k, n);
                            if (!(e >= 0.0) || !std::isfinite(e))
                                throw std::invalid_argument("power coefficients must be finite and nonnegative");
                            x_(m, k, n) = active(m, k) ? std::sqrt(s_.gamma(m, k) * e) : 0.0;
                        }
                rebuild();
            }

            void set_xi(const RealTensor &xi)
            {
                if (!xi.same_shape(x_))
                    throw std::invalid_argument("xi shape does not match channel statistics");
                for (int m = 0; m < M_; ++m)
                    for (int k = 0; k < K_; ++k)
                        for (int n = 0; n < N_; ++n)
                        {
                            const double v = xi(m, k, n);
                            if (!(v >= 0.0) || !std::isfinite(v))
                                throw std::invalid_argument("xi must be finite and nonnegative");
                            x_(m, k, n) = active(m, k) ? std::sqrt(s_.gamma(m, k)) * v : 0.0;
                        }
                rebuild();
            }

            void rebuild()
            {
                std::fill(C_.begin(), C_.end(), 0.0);
                std::fill(I_.begin(), I_.end(), 0.0);
                std::fill(E_.begin(), E_.end(), 0.0);
                for (int m = 0; m < M_; ++m)
                {
                    double p = 0.0;
                    for (double v : x_.block(m))
                        p += v * v;
                    P_[m] = p;
                    for (int k = 0; k < K_; ++k)
                        for (int n = 0; n < N_; ++n)
                        {
                            I_[k * N_ + n] += rho_ * s_.delta(m, k, n) * p;
                            if (active(m, k))
                                E_[k * N_ + n] += x_(m, k, n) * x_(m, k, n) / s_.gamma(m, k);
                            for (int j = 0; j < N_; ++j)
                                C_[c_index(k, n, j)] += A_(m, k, n) * x_(m, k, j);
                        }
                }
            }

            std::vector<double> block(int m) const
            {
                auto b = x_.block(m);
                return {b.begin(), b.end()};
            }

            void set_block(int m, const std::vector<double> &xm)
            {
                double p = 0.0;
                for (int k = 0; k < K_; ++k)
                    for (int j = 0; j < N_; ++j)
                    {
                        const double nv = active(m, k) ? xm[k * N_ + j] : 0.0;
                        const double ov = x_(m, k, j);
                        p += nv * nv;
                        if (nv == ov)
                            continue;
                        const double dx = nv - ov;
                        for (int n = 0; n < N_; ++n)
                            C_[c_index(k, n, j)] += A_(m, k, n) * dx;
                        E_[k * N_ + j] += (nv * nv - ov * ov) / s_.gamma(m, k);
                        x_(m, k, j) = nv;
                    }
                const double dp = p - P_[m];
                P_[m] = p;
                if (dp != 0.0)
                    for (int k = 0; k < K_; ++k)
                        for (int n = 0; n < N_; ++n)
                            I_[k * N_ + n] += rho_ * s_.delta(m, k, n) * dp;
            }

            double sqrt_psi(int k, int n) const { return C_[c_index(k, n, n)]; }

            double omega(int k, int n) const
            {
                double o = std::max(I_[k * N_ + n], 0.0) + 1.0;
                const int rn = ord_.rank[k][n];
                for (int j = 0; j < N_; ++j)
                    if (ord_.rank[k][j] < rn)
                    {
                        const double c = C_[c_index(k, n, j)];
                        o += c * c;
                    }
                return o;
            }

            double sinr(int k, int n) const
            {
                const double sp = sqrt_psi(k, n);
                return sp * sp / omega(k, n);
            }

            double true_se() const
            {
                double se = 0.0;
                for (int k = 0; k < K_; ++k)
                    for (int n = 0; n < N_; ++n)
                        se += std::log2(1.0 + sinr(k, n));
                return prelog_ * se;
            }

            Eigen::MatrixXd aux() const
            {
                Eigen::MatrixXd w(K_, N_);
                for (int k = 0; k < K_; ++k)
                    for (int n = 0; n < N_; ++n)
                        w(k, n) = sqrt_psi(k, n) / omega(k, n);
                return w;
            }

            double q(const Eigen::MatrixXd &w, int k, int n) const
            {
                const double wk = w(k, n);
                return 2.0 * wk * sqrt_psi(k, n) - wk * wk * omega(k, n);
            }

            double surrogate(const Eigen::MatrixXd &w) const
            {
                double f = 0.0;
                for (int k = 0; k < K_; ++k)
                    for (int n = 0; n < N_; ++n)
                    {
                        const double qk = q(w, k, n);
                        if (!(qk > -1.0))
                            return kNegInf;
                        f += std::log2(1.0 + qk);
                    }
                return prelog_ * f;
            }

            // Ranked SIC gaps D_r = sum_{i before r} E_i - E_r for one cluster.
            std::vector<double> sic_gaps(int k) const
            {
                std::vector<double> D(N_, 0.0);
                double before = 0.0;
                for (int r = 0; r < N_; ++r)
                {
                    const double own = E_[k * N_ + ord_.order[k][r]];
                    D[r] = r > 0 ? before - own : 0.0;
                    before += own;
                }
                return D;
            }

            double sic_violation() const
            {
                double worst = 0.0;
                for (int k = 0; k < K_; ++k)
                {
                    double before = 0.0;
                    for (int r = 0; r < N_; ++r)
                    {
                        const double own = E_[k * N_ + ord_.order[k][r]];
                        if (r > 0 && before > own && before > 0.0)
                            worst = std::max(worst, (before - own) / before);
                        before += own;
                    }
                }
                return worst;
            }

            double qos_shortfall(double r_min) const
            {
                double worst = 0.0;
                for (int k = 0; k < K_; ++k)
                    for (int n = 0; n < N_; ++n)
                        worst = std::max(worst, r_min - std::log2(1.0 + sinr(k, n)));
                return worst;
            }

            double power_excess() const
            {
                double worst = -1.0;
                for (double p : P_)
                    worst = std::max(worst, p - 1.0);
                return worst;
            }

            std::vector<double> sic_scale() const
            {
                std::vector<double> sc(K_, 1.0);
                for (int k = 0; k < K_; ++k)
                {
                    double t = 0.0;
                    for (int n = 0; n < N_; ++n)
                        t += E_[k * N_ + n];
                    if (t > 0.0)
                        sc[k] = t;
                }
                return sc;
            }

            double penalized(const Eigen::MatrixXd &w, const BlockOptions &o, const std::vector<double> &sc) const
            {
                const double mu = o.penalty_weight;
                double f = 0.0;
                for (int k = 0; k < K_; ++k)
                    for (int n = 0; n < N_; ++n)
                    {
                        const double qk = q(w, k, n);
                        if (!(qk > -1.0))
                            return kNegInf;
                        const double rate = std::log2(1.0 + qk);
                        f += prelog_ * rate;
                        if (mu > 0.0 && rate < o.r_min)
                            f -= mu * (o.r_min - rate) * (o.r_min - rate);
                    }
                if (mu > 0.0 && N_ > 1)
                    for (int k = 0; k < K_; ++k)
                    {
                        const std::vector<double> D = sic_gaps(k);
                        for (int r = 1; r < N_; ++r)
                            if (D[r] > 0.0)
                                f -= mu * (D[r] / sc[k]) * (D[r] / sc[k]);
                    }
                return f;
            }

            // Gradient of penalized() with respect to the normalised block x_m.
            std::vector<double> gradient(int m, const Eigen::MatrixXd &w, const BlockOptions &o,
                                         const std::vector<double> &sc) const
            {
                const double mu = o.penalty_weight;
                Eigen::MatrixXd phi(K_, N_);
                double T = 0.0;
                for (int k = 0; k < K_; ++k)
                    for (int n = 0; n < N_; ++n)
                    {
                        const double qk = 1.0 + q(w, k, n);
                        double coef = prelog_;
                        if (mu > 0.0)
                        {
                            const double rate = std::log2(qk);
                            if (rate < o.r_min)
                                coef += 2.0 * mu * (o.r_min - rate);
                        }
                        phi(k, n) = coef / (qk * std::numbers::ln2);
                        T += phi(k, n) * w(k, n) * w(k, n) * s_.delta(m, k, n);
                    }

                std::vector<double> g(static_cast<size_t>(K_) * N_, 0.0);
                for (int k = 0; k < K_; ++k)
                {
                    if (!active(m, k))
                        continue;
                    std::vector<double> dE(N_, 0.0);
                    if (mu > 0.0 && N_ > 1)
                    {
                        const std::vector<double> D = sic_gaps(k);
                        for (int r = 1; r < N_; ++r)
                        {
                            if (D[r] <= 0.0)
                                continue;
                            const double d = 2.0 * mu * D[r] / (sc[k] * sc[k]);
                            for (int j = 0; j < N_; ++j)
                            {
                                const int rj = ord_.rank[k][j];
                                if (rj < r)
                                    dE[j] += d;
                                else if (rj == r)
                                    dE[j] -= d;
                            }
                        }
                    }
                    for (int j = 0; j < N_; ++j)
                    {
                        const double xv = x_(m, k, j);
                        double v = phi(k, j) * 2.0 * w(k, j) * A_(m, k, j) - 2.0 * rho_ * xv * T;
                        const int rj = ord_.rank[k][j];
                        for (int n = 0; n < N_; ++n)
                            if (rj < ord_.rank[k][n])
                                v -= phi(k, n) * w(k, n) * w(k, n) * 2.0 * C_[c_index(k, n, j)] * A_(m, k, n);
                        v -= dE[j] * 2.0 * xv / s_.gamma(m, k);
                        g[k * N_ + j] = v;
                    }
                }
                return g;
            }

            // Euclidean projection onto {x >= 0, ||x|| <= 1} with inactive entries pinned at 0.
            std::vector<double> project(int m, std::vector<double> v) const
            {
                double norm2 = 0.0;
                for (int k = 0; k < K_; ++k)
                    for (int n = 0; n < N_; ++n)
                    {
                        double &e = v[k * N_ + n];
                        e = active(m, k) ? std::max(e, 0.0) : 0.0;
                        norm2 += e * e;
                    }
                if (norm2 > 1.0)
                {
                    const double f = 1.0 / std::sqrt(norm2);
                    for (double &e : v)
                        e *= f;
                }
                return v;
            }

            RealTensor eta() const
            {
                RealTensor e(M_, K_, N_);
                for (int m = 0; m < M_; ++m)
                    for (int k = 0; k < K_; ++k)
                        if (active(m, k))
                            for (int n = 0; n < N_; ++n)
                                e(m, k, n) = x_(m, k, n) * x_(m, k, n) / s_.gamma(m, k);
                return e;
            }

            double gamma(int m, int k) const { return s_.gamma(m, k); }

        private:
            size_t c_index(int k, int n, int j) const { return (static_cast<size_t>(k) * N_ + n) * N_ + j; }

            const ChannelStats &s_;
            const Ordering &ord_;
            double rho_, prelog_;
            int M_, K_, N_;
            RealTensor A_;
            RealTensor x_;
            std::vector<double> C_;
            std::vector<double> P_;
            std::vector<double> I_;
            std::vector<double> E_;
        };

        double distance2(const std::vector<double> &a, const std::vector<double> &b)
        {
            double d = 0.0;
            for (size_t i = 0; i < a.size(); ++i)
                d += (a[i] - b[i]) * (a[i] - b[i]);
            return d;
        }

        // Projected gradient ascent with Armijo backtracking on block m. The model is left
        // with the returned block applied.
        std::vector<double> ascend_block(QtModel &mdl, int m, const Eigen::MatrixXd &w, const BlockOptions &o,
                                         const std::vector<double> &sc)
        {
            std::vector<double> x = mdl.block(m);
            double f = mdl.penalized(w, o, sc);
            double alpha = 0.0;
            for (int it = 0; it < o.max_iterations; ++it)
            {
                const std::vector<double> g = mdl.gradient(m, w, o, sc);
                double gnorm2 = 0.0;
                for (double v : g)
                {
                    if (!std::isfinite(v))
                    {
                        std::ostringstream msg;
                        msg << "solve_block: non-finite gradient at block " << m << ", iteration " << it << ", x =";
                        for (double xv : x)
                            msg << ' ' << xv;
                        throw std::runtime_error(msg.str());
                    }
                    gnorm2 += v * v;
                }
                if (gnorm2 == 0.0)
                    break;
                if (alpha == 0.0)
                    alpha = 1.0 / std::sqrt(gnorm2);

                bool moved = false;
                std::vector<double> cand;
                for (int ls = 0; ls < 60; ++ls)
                {
                    std::vector<double> trial(x.size());
                    for (size_t i = 0; i < x.size(); ++i)
                        trial[i] = x[i] + alpha * g[i];
                    cand = mdl.project(m, std::move(trial));
                    double dir = 0.0;
                    for (size_t i = 0; i < x.size(); ++i)
                        dir += g[i] * (cand[i] - x[i]);
                    if (dir <= 0.0)
                        break;
                    mdl.set_block(m, cand);
                    const double fc = mdl.penalized(w, o, sc);
                    if (fc >= f + o.armijo * dir)
                    {
                        moved = true;
                        const double gain = fc - f;
                        f = fc;
                        const double step2 = distance2(cand, x);
                        x = cand;
                        alpha *= 2.0;
                        if (step2 <= 1e-20 || gain <= 1e-14 * std::max(1.0, std::abs(f)))
                            return x;
                        break;
                    }
                    mdl.set_block(m, x);
                    alpha *= o.shrink;
                }
                if (!moved)
                    break;
            }
            mdl.set_block(m, x);
            return x;
        }
    } // namespace

    Eigen::MatrixXd qt_aux_update(const RealTensor &xi, const ChannelStats &stats, double rho_d,
                                  const Ordering &ordering)
    {
        QtModel mdl(stats, rho_d, ordering, 1.0);
        mdl.set_xi(xi);
        return mdl.aux();
    }

    double qt_surrogate(const RealTensor &xi, const Eigen::MatrixXd &w, const ChannelStats &stats, double rho_d,
                        const Ordering &ordering, double prelog)
    {
        QtModel mdl(stats, rho_d, ordering, prelog);
        mdl.set_xi(xi);
        if (w.rows() != mdl.K() || w.cols() != mdl.N())
            throw std::invalid_argument("qt_surrogate: w shape mismatch");
        return mdl.surrogate(w);
    }

    std::vector<double> qt_block_gradient(int m, const RealTensor &xi, const Eigen::MatrixXd &w,
                                          const ChannelStats &stats, double rho_d, const Ordering &ordering,
                                          double prelog)
    {
        QtModel mdl(stats, rho_d, ordering, prelog);
        mdl.set_xi(xi);
        if (m < 0 || m >= mdl.M())
            throw std::invalid_argument("qt_block_gradient: block index out of range");
        BlockOptions plain;
        std::vector<double> g = mdl.gradient(m, w, plain, std::vector<double>(mdl.K(), 1.0));
        // d/dxi = sqrt(gamma) d/dx
        for (int k = 0; k < mdl.K(); ++k)
            for (int n = 0; n < mdl.N(); ++n)
                g[k * mdl.N() + n] *= std::sqrt(mdl.gamma(m, k));
        return g;
    }

    std::vector<double> solve_block(int m, const RealTensor &xi, const Eigen::MatrixXd &w, const ChannelStats &stats,
                                    double rho_d, const Ordering &ordering, double prelog, const BlockOptions &options)
    {
        QtModel mdl(stats, rho_d, ordering, prelog);
        mdl.set_xi(xi);
        if (m < 0 || m >= mdl.M())
            throw std::invalid_argument("solve_block: block index out of range");
        const std::vector<double> x = ascend_block(mdl, m, w, options, mdl.sic_scale());
        std::vector<double> out(x.size(), 0.0);
        for (int k = 0; k < mdl.K(); ++k)
            if (mdl.active(m, k))
                for (int n = 0; n < mdl.N(); ++n)
                    out[k * mdl.N() + n] = x[k * mdl.N() + n] / std::sqrt(mdl.gamma(m, k));
        return out;
    }

    QtResult successive_qt(const ChannelStats &stats, double rho_d, const Ordering &ordering, double prelog,
                           const RealTensor &init, const QtParams &params)
    {
        if (params.J1 < 1 || params.J2 < 1)
            throw std::invalid_argument("successive_qt: iteration caps must be positive");
        if (!(params.zeta > 0.0))
            throw std::invalid_argument("successive_qt: zeta must be positive");

        QtModel mdl(stats, rho_d, ordering, prelog);
        mdl.set_eta(init);

        // Pull an over-budget start back onto the feasible set.
        for (int m = 0; m < mdl.M(); ++m)
        {
            const std::vector<double> b = mdl.block(m);
            const std::vector<double> p = mdl.project(m, b);
            if (p != b)
                mdl.set_block(m, p);
        }
        if (params.repair_initial_sic && mdl.sic_violation() > params.sic_tolerance)
            mdl.set_eta(sic_feasible_allocation(stats, ordering));

        const int M = mdl.M();
        QtResult res;
        double se = mdl.true_se();
        double viol = mdl.sic_violation();

        for (int j1 = 1; j1 <= params.J1; ++j1)
        {
            BlockOptions opt;
            opt.r_min = params.r_min;
            opt.max_iterations = params.block_iterations;
            const int ramp = std::max(params.penalty_ramp, 2);
            const double t = std::min(j1 - 1, ramp - 1) / static_cast<double>(ramp - 1);
            opt.penalty_weight = params.penalty_start * std::pow(params.penalty_end / params.penalty_start, t);

            const RealTensor before = mdl.x();
            for (int m = 0; m < M; ++m)
            {
                for (int j2 = 1; j2 <= params.J2; ++j2)
                {
                    const Eigen::MatrixXd w = mdl.aux();
                    const std::vector<double> sc = mdl.sic_scale();
                    const std::vector<double> old_block = mdl.block(m);
                    const std::vector<double> new_block = ascend_block(mdl, m, w, opt, sc);

                    // Accept only moves that keep the true sum SE monotone and do not worsen
                    // the SIC ordering; otherwise retreat along the segment towards the old block.
                    const double tol = std::max(params.sic_tolerance, viol);
                    double new_se = mdl.true_se();
                    double new_viol = mdl.sic_violation();
                    if (!(new_se >= se && new_viol <= tol))
                    {
                        bool ok = false;
                        double step = 1.0;
                        for (int bt = 0; bt < 30 && !ok; ++bt)
                        {
                            step *= 0.5;
                            std::vector<double> mid(old_block.size());
                            for (size_t i = 0; i < mid.size(); ++i)
                                mid[i] = old_block[i] + step * (new_block[i] - old_block[i]);
                            mdl.set_block(m, mid);
                            new_se = mdl.true_se();
                            new_viol = mdl.sic_violation();
                            ok = new_se >= se && new_viol <= tol;
                        }
                        if (!ok)
                        {
                            mdl.set_block(m, old_block);
                            new_se = se;
                            new_viol = viol;
                        }
                    }
                    se = new_se;
                    viol = new_viol;
                    const std::vector<double> accepted = mdl.block(m);

                    QtTraceRow row;
                    row.iteration = j1;
                    row.block = m;
                    row.surrogate = mdl.surrogate(w);
                    row.true_se = se;
                    row.max_violation = std::max({viol, mdl.power_excess(), 0.0});
                    res.trace.push_back(row);

                    if (distance2(accepted, old_block) <= params.zeta)
                        break;
                }
            }
            mdl.rebuild();
            se = mdl.true_se();
            viol = mdl.sic_violation();

            res.iterations = j1;
            double change = 0.0;
            for (size_t i = 0; i < before.data().size(); ++i)
            {
                const double d = mdl.x().data()[i] - before.data()[i];
                change += d * d;
            }
            if (change <= params.zeta)
            {
                res.converged = true;
                break;
            }
        }

        res.truncated = !res.converged;
        res.eta = mdl.eta();
        res.sum_se = closed_form_sum_se(stats, res.eta, rho_d, ordering, prelog);
        res.power_excess = power_constraint_excess(stats, res.eta);
        res.sic_violation = sic_violation(res.eta, ordering);
        res.qos_shortfall = mdl.qos_shortfall(params.r_min);
        return res;
    }

} // namespace riscf
