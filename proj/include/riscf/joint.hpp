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

#ifndef RISCF_JOINT_HPP
#define RISCF_JOINT_HPP

#include "riscf/phase_opt.hpp"
#include "riscf/power_opt.hpp"

#include <cstdint>
#include <vector>

namespace riscf
{
    struct JointParams
    {
        QtParams qt;
        PsoParams pso;
        double epsilon = 1e-3; // bits/s/Hz
        int max_iterations = 50;
        std::uint64_t seed = 1; // initial phases and PSO streams
    };

    struct JointIteration
    {
        int iteration = 0;
        double se_after_power = 0.0;
        double se_after_phase = 0.0;
    };

    struct JointResult
    {
        RealTensor eta;
        PhaseVector theta;
        double sum_se = 0.0;
        RealTensor initial_eta;
        PhaseVector initial_theta;
        double initial_se = 0.0;
        std::vector<JointIteration> iterations;
        bool converged = false;
        bool truncated = false;
    };

    // Starting point: uniform random phases from the seed and equal power allocation.
    void joint_initial_point(const Scenario &scenario, std::uint64_t seed, RealTensor &eta, PhaseVector &theta);

    // Alternates successive-QT power allocation and PSO phase design until the sum SE
    // gain of one round is at most epsilon.
    JointResult alternate_optimize(const Scenario &scenario, const JointParams &params = {});

} // namespace riscf

#endif
