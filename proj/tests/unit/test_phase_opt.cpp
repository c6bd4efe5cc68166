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
#include "riscf/power_opt.hpp"
#include "../support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace riscf;

TEST_CASE("constriction factor")
{
    const double k5 = 2.0 / (3.0 + std::sqrt(5.0));
    CHECK(constriction_factor(2.5, 2.5) == doctest::Approx(k5).epsilon(1e-14));
    CHECK(constriction_factor(2.5, 2.5) == doctest::Approx(0.38197).epsilon(1e-5));
    CHECK(constriction_factor(2.00005, 2.00005) == doctest::Approx(0.9901).epsilon(1e-4));
    CHECK(constriction_factor(2.05, 2.05) == doctest::Approx(0.7298).epsilon(1e-4));
    CHECK_THROWS_AS(constriction_factor(2.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(constriction_factor(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("velocity and position update by hand")
{
    PsoParams p;
    Swarm s;
    s.position = {{0.0}};
    s.velocity = {{0.1}};
    s.best_position = {{0.5}};
    s.best_fitness = {0.0};
    s.global_position = {0.5};
    s.global_fitness = 0.0;
    const Fitness flat = [](const PhaseVector &) { return 1.0; };
    pso_step(s, flat, p, [] { return 1.0; });
    const double kappa = constriction_factor(2.05, 2.05);
    const double v = kappa * (0.1 + 2.05 * 0.5 + 2.05 * 0.5);
    CHECK(v == doctest::Approx(1.56907).epsilon(1e-4));
    CHECK(s.velocity[0][0] == doctest::Approx(v).epsilon(1e-14));
    CHECK(s.position[0][0] == doctest::Approx(wrap_phase(v)).epsilon(1e-14));
    // a worse fitness leaves the bests alone
    CHECK(s.best_position[0][0] == 0.5);
    CHECK(s.global_fitness == 0.0);

    // velocities above the cap are clamped, positions wrapped
    s.velocity = {{6.0}};
    s.position = {{6.0}};
    s.best_position = {{6.0}};
    s.global_position = {6.0};
    pso_step(s, flat, p, [] { return 0.0; });
    CHECK(s.velocity[0][0] == doctest::Approx(kappa * 6.0));
    CHECK(s.position[0][0] == doctest::Approx(wrap_phase(6.0 + kappa * 6.0)));
}

TEST_CASE("a swarm resting on the optimum stays there")
{
    PsoParams p;
    Swarm s;
    s.position = {{1.0, 2.0}};
    s.velocity = {{0.0, 0.0}};
    s.best_position = s.position;
    s.best_fitness = {-1.0};
    s.global_position = s.position[0];
    s.global_fitness = -1.0;
    Rng rng = make_rng(1, 1);
    const Fitness f = [](const PhaseVector &t) { return -std::cos(t[0] - 1.0) * std::cos(t[1] - 2.0); };
    for (int i = 0; i < 10; ++i)
        pso_step(s, f, p, [&rng] { return uniform01(rng); });
    CHECK(s.position[0][0] == doctest::Approx(1.0));
    CHECK(s.position[0][1] == doctest::Approx(2.0));
    CHECK(s.global_fitness == -1.0);
}

TEST_CASE("global best is monotone on a rugged landscape")
{
    PsoParams p;
    Rng rng = make_rng(2, 1);
    const Fitness f = [](const PhaseVector &t)
    {
        double v = 0.0;
        for (int i = 0; i < t.size(); ++i)
            v += std::sin(5.0 * t[i]) + 0.3 * std::cos(13.0 * t[i] + i);
        return v;
    };
    Swarm s = init_swarm(20, 5, f, p, rng);
    double prev = s.global_fitness;
    for (int i = 0; i < 100; ++i)
    {
        pso_step(s, f, p, [&rng] { return uniform01(rng); });
        CHECK(s.global_fitness <= prev);
        CHECK(f(PhaseVector(s.global_position)) == s.global_fitness);
        prev = s.global_fitness;
    }
}

TEST_CASE("incumbent injection")
{
    PsoParams p;
    Rng rng = make_rng(3, 1);
    const Fitness f = [](const PhaseVector &t) { return std::abs(t[0] - 0.25); };
    const PhaseVector inc({0.25});
    const Swarm s = init_swarm(8, 1, f, p, rng, &inc);
    CHECK(s.position[0][0] == 0.25);
    CHECK(s.global_fitness == 0.0);
    const PhaseVector wrong({0.1, 0.2});
    CHECK_THROWS_AS(init_swarm(8, 1, f, p, rng, &wrong), std::invalid_argument);
}

TEST_CASE("phase objective with feasibility scaling")
{
    const Scenario s = testing::strong_ris_scenario(3, 2, 2, 4, 4);
    const ChannelStats st0 = channel_stats(s, PhaseVector::zeros(4));
    RealTensor eta = equal_power_allocation(st0);
    for (double &v : eta.data())
        v *= 3.0;
    const RealTensor scaled = scale_to_feasible(st0, eta);
    CHECK(power_constraint_excess(st0, scaled) <= 1e-12);
    const RealTensor same = scale_to_feasible(st0, equal_power_allocation(st0));
    CHECK(same.data() == equal_power_allocation(st0).data());

    PsoParams p;
    p.seed = 4;
    const PhaseVector start({0.1, 0.2, 0.3, 0.4});
    const PsoResult r = pso_optimize(s, equal_power_allocation(st0), p, &start);
    CHECK(r.sum_se >= phase_sum_se(s, equal_power_allocation(st0), start));
    CHECK(r.sum_se == doctest::Approx(phase_sum_se(s, r.eta, r.theta)).epsilon(1e-12));
    CHECK(r.trace.size() == static_cast<size_t>(p.resolved_iterations(4) + 1));
    const PsoResult again = pso_optimize(s, equal_power_allocation(st0), p, &start);
    CHECK(again.theta.values() == r.theta.values());
}
