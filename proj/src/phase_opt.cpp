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

#include "riscf/phase_opt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riscf
{
    double constriction_factor(double c1, double c2)
    {
        const double omega = c1 + c2;
        if (!(omega > 4.0))
            throw std::invalid_argument("constriction_factor: c1 + c2 must exceed 4");
        return 2.0 / std::abs(2.0 - omega - std::sqrt(omega * omega - 4.0 * omega));
    }

    int PsoParams::resolved_swarm_size(int L) const
    {
        return swarm_size > 0 ? swarm_size : std::min(100, 10 * L);
    }

    int PsoParams::resolved_iterations(int L) const
    {
        return iterations > 0 ? iterations : 5 * L;
    }

    Swarm init_swarm(int swarm_size, int L, const Fitness &fitness, const PsoParams &params, Rng &rng,
                     const PhaseVector *incumbent)
    {
        if (swarm_size < 1 || L < 1)
            throw std::invalid_argument("init_swarm: swarm size and dimension must be positive");
        if (incumbent && incumbent->size() != L)
            throw std::invalid_argument("init_swarm: incumbent has the wrong dimension");
        if (!(params.v_max >= params.v_min))
            throw std::invalid_argument("init_swarm: v_max must not be below v_min");

        std::uniform_real_distribution<double> pos(0.0, 2.0 * std::numbers::pi);
        std::uniform_real_distribution<double> vel(params.v_min, params.v_max);
        Swarm s;
        s.position.assign(swarm_size, std::vector<double>(L));
        s.velocity.assign(swarm_size, std::vector<double>(L));
        for (int p = 0; p < swarm_size; ++p)
            for (int i = 0; i < L; ++i)
            {
                s.position[p][i] = pos(rng);
                s.velocity[p][i] = vel(rng);
            }
        if (incumbent)
            s.position[0] = incumbent->values();

        s.best_position = s.position;
        s.best_fitness.resize(swarm_size);
        for (int p = 0; p < swarm_size; ++p)
        {
            s.best_position[p] = PhaseVector(s.position[p]).values();
            s.best_fitness[p] = fitness(PhaseVector(s.position[p]));
        }
        int g = 0;
        for (int p = 1; p < swarm_size; ++p)
            if (s.best_fitness[p] < s.best_fitness[g])
                g = p;
        s.global_position = s.best_position[g];
        s.global_fitness = s.best_fitness[g];
        return s;
    }

    void pso_step(Swarm &s, const Fitness &fitness, const PsoParams &params, const UniformSource &uniform)
    {
        const double kappa = constriction_factor(params.c1, params.c2);
        const int S = s.size();
        std::vector<double> fit(S);
        for (int p = 0; p < S; ++p)
        {
            auto &x = s.position[p];
            auto &v = s.velocity[p];
            const int L = static_cast<int>(x.size());
            for (int i = 0; i < L; ++i)
            {
                const double u1 = uniform();
                const double u2 = uniform();
                double nv = kappa * (v[i] + params.c1 * u1 * (s.best_position[p][i] - x[i]) +
                                     params.c2 * u2 * (s.global_position[i] - x[i]));
                nv = std::clamp(nv, params.v_min, params.v_max);
                v[i] = nv;
                x[i] = wrap_phase(x[i] + nv);
            }
            fit[p] = fitness(PhaseVector(x));
        }
        for (int p = 0; p < S; ++p)
        {
            if (fit[p] < s.best_fitness[p])
            {
                s.best_fitness[p] = fit[p];
                s.best_position[p] = s.position[p];
            }
            if (s.best_fitness[p] < s.global_fitness)
            {
                s.global_fitness = s.best_fitness[p];
                s.global_position = s.best_position[p];
            }
        }
        ++s.t;
    }

    RealTensor scale_to_feasible(const ChannelStats &stats, const RealTensor &eta)
    {
        RealTensor out = eta;
        for (int m = 0; m < stats.M(); ++m)
        {
            double load = 0.0;
            for (int k = 0; k < stats.K(); ++k)
                for (int n = 0; n < stats.N(); ++n)
                    load += stats.gamma(m, k) * eta(m, k, n);
            if (load > 1.0)
                for (double &v : out.block(m))
                    v /= load;
        }
        return out;
    }

    double phase_sum_se(const Scenario &scenario, const RealTensor &eta, const PhaseVector &theta)
    {
        const ChannelStats stats = channel_stats(scenario, theta);
        const RealTensor feasible = scale_to_feasible(stats, eta);
        return closed_form_sum_se(stats, feasible, scenario.config.rho_d(), order_users(stats),
                                  scenario.config.prelog());
    }

    PsoResult pso_optimize(const Scenario &scenario, const RealTensor &eta, const PsoParams &params,
                           const PhaseVector *incumbent)
    {
        const int L = scenario.L();
        const int S = params.resolved_swarm_size(L);
        const int T = params.resolved_iterations(L);
        Rng rng = make_rng(params.seed, Stream::pso, params.stream);
        const Fitness fitness = [&](const PhaseVector &theta) { return -phase_sum_se(scenario, eta, theta); };
        const UniformSource uniform = [&rng] { return uniform01(rng); };

        Swarm swarm = init_swarm(S, L, fitness, params, rng, incumbent);
        PsoResult res;
        res.trace.reserve(T + 1);
        res.trace.push_back(-swarm.global_fitness);
        for (int t = 0; t < T; ++t)
        {
            pso_step(swarm, fitness, params, uniform);
            res.trace.push_back(-swarm.global_fitness);
        }
        res.theta = PhaseVector(swarm.global_position);
        res.sum_se = -swarm.global_fitness;
        res.eta = scale_to_feasible(channel_stats(scenario, res.theta), eta);
        return res;
    }

} // namespace riscf
