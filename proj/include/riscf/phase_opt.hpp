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

#ifndef RISCF_PHASE_OPT_HPP
#define RISCF_PHASE_OPT_HPP

#include "riscf/spectral.hpp"

#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace riscf
{
    // kappa = 2 / |2 - omega - sqrt(omega^2 - 4 omega)|, omega = c1 + c2 > 4.
    double constriction_factor(double c1, double c2);

    struct PsoParams
    {
        double c1 = 2.05;
        double c2 = 2.05;
        int swarm_size = 0; // 0: min(100, 10 L)
        int iterations = 0; // 0: 5 L
        double v_min = 0.0;
        double v_max = 2.0 * std::numbers::pi;
        std::uint64_t seed = 1;
        std::uint64_t stream = 0;

        int resolved_swarm_size(int L) const;
        int resolved_iterations(int L) const;
    };

    // Minimisation convention: fitness is the negated sum SE.
    using Fitness = std::function<double(const PhaseVector &)>;
    using UniformSource = std::function<double()>;

    struct Swarm
    {
        std::vector<std::vector<double>> position;
        std::vector<std::vector<double>> velocity;
        std::vector<std::vector<double>> best_position;
        std::vector<double> best_fitness;
        std::vector<double> global_position;
        double global_fitness = 0.0;
        int t = 0;

        int size() const { return static_cast<int>(position.size()); }
    };

    // Uniform positions on [0, 2 pi) and velocities on [v_min, v_max]; the incumbent, if
    // given, replaces particle 0.
    Swarm init_swarm(int swarm_size, int L, const Fitness &fitness, const PsoParams &params, Rng &rng,
                     const PhaseVector *incumbent = nullptr);

    // One velocity/position update of every particle, then strict-improvement best updates
    // in particle order. u1 and u2 are drawn per particle and dimension from `uniform`.
    void pso_step(Swarm &swarm, const Fitness &fitness, const PsoParams &params, const UniformSource &uniform);

    // Scales each AP row of eta down so that sum_kn gamma_mk eta_mkn <= 1.
    RealTensor scale_to_feasible(const ChannelStats &stats, const RealTensor &eta);

    // Closed-form sum SE at theta with statistics and SIC order recomputed for theta.
    double phase_sum_se(const Scenario &scenario, const RealTensor &eta, const PhaseVector &theta);

    struct PsoResult
    {
        PhaseVector theta;
        double sum_se = 0.0;
        RealTensor eta;            // eta scaled to be feasible at theta
        std::vector<double> trace; // global-best sum SE after initialisation and each iteration
    };

    PsoResult pso_optimize(const Scenario &scenario, const RealTensor &eta, const PsoParams &params = {},
                           const PhaseVector *incumbent = nullptr);

} // namespace riscf

#endif
