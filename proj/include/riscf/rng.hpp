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

#ifndef RISCF_RNG_HPP
#define RISCF_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace riscf
{
    using Rng = std::mt19937_64;

    // Independent stream per (seed, stream) pair; used to split Monte Carlo
    // trials and sweep points so results do not depend on scheduling.
    inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                          0x52495343u};
        return Rng(seq);
    }

    // Stream tags so that independent consumers of one seed never share draws.
    enum class Stream : std::uint64_t
    {
        scenario = 1,
        initial_phase = 2,
        pso = 3,
        monte_carlo = 4,
    };

    inline Rng make_rng(std::uint64_t seed, Stream s, std::uint64_t index = 0)
    {
        return make_rng(seed, (static_cast<std::uint64_t>(s) << 48) ^ index);
    }

    // CN(0, 1): variance split equally between real and imaginary parts.
    inline std::complex<double> complex_normal(Rng &rng)
    {
        std::normal_distribution<double> half(0.0, std::sqrt(0.5));
        const double re = half(rng);
        const double im = half(rng);
        return {re, im};
    }

    inline double uniform01(Rng &rng)
    {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }

} // namespace riscf

#endif
