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

#include "riscf/joint.hpp"

#include <stdexcept>

namespace riscf
{
    void joint_initial_point(const Scenario &scenario, std::uint64_t seed, RealTensor &eta, PhaseVector &theta)
    {
        Rng rng = make_rng(seed, Stream::initial_phase);
        theta = PhaseVector::uniform(scenario.L(), rng);
        eta = equal_power_allocation(channel_stats(scenario, theta));
    }

    JointResult alternate_optimize(const Scenario &scenario, const JointParams &params)
    {
        if (params.max_iterations < 1)
            throw std::invalid_argument("alternate_optimize: max_iterations must be positive");
        if (!(params.epsilon >= 0.0))
            throw std::invalid_argument("alternate_optimize: epsilon must be nonnegative");

        const double rho = scenario.config.rho_d();
        const double prelog = scenario.config.prelog();

        JointResult res;
        joint_initial_point(scenario, params.seed, res.initial_eta, res.initial_theta);
        res.initial_se = phase_sum_se(scenario, res.initial_eta, res.initial_theta);

        RealTensor eta = res.initial_eta;
        PhaseVector theta = res.initial_theta;
        double previous = res.initial_se;
        res.eta = eta;
        res.theta = theta;
        res.sum_se = previous;

        for (int i = 1; i <= params.max_iterations; ++i)
        {
            const ChannelStats stats = channel_stats(scenario, theta);
            const Ordering ord = order_users(stats);

            QtParams qp = params.qt;
            // Only the very first start may be replaced by the SIC-feasible allocation;
            // later rounds warm-start from the incumbent so the sequence stays monotone.
            qp.repair_initial_sic = qp.repair_initial_sic && i == 1;
            const QtResult power = successive_qt(stats, rho, ord, prelog, scale_to_feasible(stats, eta), qp);

            PsoParams pp = params.pso;
            pp.seed = params.seed;
            pp.stream = static_cast<std::uint64_t>(i);
            const PsoResult phase = pso_optimize(scenario, power.eta, pp, &theta);

            res.iterations.push_back({i, power.sum_se, phase.sum_se});
            eta = phase.eta;
            theta = phase.theta;
            if (phase.sum_se > res.sum_se)
            {
                res.sum_se = phase.sum_se;
                res.eta = eta;
                res.theta = theta;
            }
            if (phase.sum_se - previous <= params.epsilon)
            {
                res.converged = true;
                break;
            }
            previous = phase.sum_se;
        }
        res.truncated = !res.converged;
        return res;
    }

} // namespace riscf
