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
#include "../support.hpp"

#include <doctest.h>

using namespace riscf;

TEST_CASE("joint optimisation on a drop with identity correlation")
{
    SystemConfig c;
    c.M = 6;
    c.K = 2;
    c.N = 2;
    c.L = 8;
    c.correlated = false;
    c.seed = 2;
    const Scenario s = generate_scenario(c);
    JointParams p;
    p.seed = 2;
    p.pso.iterations = 5;
    const JointResult r = alternate_optimize(s, p);
    REQUIRE(!r.iterations.empty());
    for (const auto &it : r.iterations)
        CHECK(it.se_after_phase == doctest::Approx(it.se_after_power).epsilon(1e-12));
    CHECK(r.converged);
    CHECK(r.iterations.size() <= 3);
    CHECK(r.sum_se >= r.initial_se);
}

TEST_CASE("joint optimisation is deterministic and monotone")
{
    const Scenario s = testing::strong_ris_scenario(4, 2, 2, 4, 3);
    JointParams p;
    p.seed = 3;
    const JointResult a = alternate_optimize(s, p);
    const JointResult b = alternate_optimize(s, p);
    CHECK(a.sum_se == b.sum_se);
    CHECK(a.theta.values() == b.theta.values());
    CHECK(a.eta.data() == b.eta.data());

    double prev = a.initial_se;
    for (const auto &it : a.iterations)
    {
        CHECK(it.se_after_power >= prev - 1e-6);
        CHECK(it.se_after_phase >= it.se_after_power - 1e-6);
        prev = it.se_after_phase;
    }
    CHECK(a.sum_se == doctest::Approx(evaluate(s, a.theta, a.eta).sum_se).epsilon(1e-12));

    RealTensor eta;
    PhaseVector theta;
    joint_initial_point(s, 3, eta, theta);
    CHECK(theta.values() == a.initial_theta.values());
    CHECK(eta.data() == a.initial_eta.data());
}

TEST_CASE("iteration cap sets the truncation flag")
{
    const Scenario s = testing::strong_ris_scenario(4, 2, 2, 4, 5);
    JointParams p;
    p.seed = 5;
    p.max_iterations = 1;
    p.epsilon = 0.0;
    const JointResult r = alternate_optimize(s, p);
    CHECK(r.iterations.size() == 1);
    CHECK(r.truncated);
    CHECK(!r.converged);
}
