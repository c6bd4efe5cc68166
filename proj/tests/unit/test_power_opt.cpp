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
#include "../support.hpp"

#include <doctest.h>

#include <cmath>

using namespace riscf;

namespace
{
    // Psi = rho gamma^2 eta = 4 and Omega = rho gamma eta + 1 = 2 at rho = 1, gamma = 4, eta = 1/4.
    struct HandPoint
    {
        ChannelStats stats;
        RealTensor xi{1, 1, 1, 0.5};
        HandPoint()
        {
            Eigen::MatrixXd gamma(1, 1);
            gamma(0, 0) = 4.0;
            stats = testing::make_stats(RealTensor(1, 1, 1, 1.0), gamma);
        }
    };
}

TEST_CASE("surrogate by hand")
{
    const HandPoint h;
    const Ordering id = Ordering::identity(1, 1);
    const Eigen::MatrixXd w = qt_aux_update(h.xi, h.stats, 1.0, id);
    CHECK(w(0, 0) == doctest::Approx(1.0));
    CHECK(qt_surrogate(h.xi, w, h.stats, 1.0, id, 0.8) == doctest::Approx(0.8 * std::log2(3.0)).epsilon(1e-12));
    CHECK(qt_surrogate(h.xi, w, h.stats, 1.0, id, 0.8) == doctest::Approx(1.2680).epsilon(1e-4));

    // a w that pushes the quadratic form below -1 has no finite value
    Eigen::MatrixXd big(1, 1);
    big(0, 0) = 10.0;
    CHECK(std::isinf(qt_surrogate(h.xi, big, h.stats, 1.0, id, 0.8)));
}

TEST_CASE("equal power allocation")
{
    RealTensor delta(2, 2, 2);
    Rng rng = make_rng(3, 3);
    for (double &v : delta.data())
        v = 0.1 + uniform01(rng);
    const ChannelStats s = testing::make_stats(delta, 5.0);
    const RealTensor eta = equal_power_allocation(s);
    for (int m = 0; m < 2; ++m)
    {
        const double expected = 1.0 / (2.0 * (s.gamma(m, 0) + s.gamma(m, 1)));
        double used = 0.0;
        for (int k = 0; k < 2; ++k)
            for (int n = 0; n < 2; ++n)
            {
                CHECK(eta(m, k, n) == doctest::Approx(expected).epsilon(1e-14));
                used += s.gamma(m, k) * eta(m, k, n);
            }
        CHECK(used == doctest::Approx(1.0).epsilon(1e-14));
    }

    // an AP without estimation gain stays silent
    RealTensor dz = delta;
    for (int k = 0; k < 2; ++k)
        for (int n = 0; n < 2; ++n)
            dz(1, k, n) = 0.0;
    const RealTensor ez = equal_power_allocation(testing::make_stats(dz, 5.0));
    CHECK(ez(1, 0, 0) == 0.0);
    CHECK(std::isfinite(ez(0, 0, 0)));
}

TEST_CASE("SIC-feasible start")
{
    RealTensor delta(3, 2, 3);
    Rng rng = make_rng(4, 3);
    for (double &v : delta.data())
        v = 0.1 + uniform01(rng);
    const ChannelStats s = testing::make_stats(delta, 5.0);
    const Ordering ord = order_users(s);
    const RealTensor eta = sic_feasible_allocation(s, ord);
    CHECK(sic_violation(eta, ord) == 0.0);
    CHECK(power_constraint_excess(s, eta) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("successive QT keeps power within budget and never lowers the sum SE")
{
    for (std::uint64_t seed = 1; seed <= 3; ++seed)
    {
        RealTensor delta(4, 2, 2);
        Rng rng = make_rng(seed, 8);
        for (double &v : delta.data())
            v = 0.05 + uniform01(rng);
        const ChannelStats s = testing::make_stats(delta, 5.0);
        const Ordering ord = order_users(s);
        const RealTensor init = sic_feasible_allocation(s, ord);
        const double start = closed_form_sum_se(s, init, 4.0, ord, 0.9);
        const QtResult r = successive_qt(s, 4.0, ord, 0.9, init);
        CHECK(r.sum_se >= start);
        CHECK(r.power_excess <= 1e-9);
        CHECK(r.sic_violation <= 1e-4 + 1e-12);
        CHECK(r.sum_se == doctest::Approx(closed_form_sum_se(s, r.eta, 4.0, ord, 0.9)).epsilon(1e-12));
        for (size_t i = 1; i < r.trace.size(); ++i)
            CHECK(r.trace[i].true_se >= r.trace[i - 1].true_se - 1e-12);
    }
}

TEST_CASE("successive QT parameter checks")
{
    const HandPoint h;
    QtParams p;
    p.J1 = 0;
    CHECK_THROWS_AS(successive_qt(h.stats, 1.0, Ordering::identity(1, 1), 1.0, h.xi, p), std::invalid_argument);
    p = {};
    p.zeta = 0.0;
    CHECK_THROWS_AS(successive_qt(h.stats, 1.0, Ordering::identity(1, 1), 1.0, h.xi, p), std::invalid_argument);
}
