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

#ifndef RISCF_RUNNER_HPP
#define RISCF_RUNNER_HPP

#include "riscf/joint.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace riscf
{
    enum class SweepAxis
    {
        rho_d_dbm,
        total_users,
        L,
        M,
    };

    enum class Mode
    {
        noma_cf,
        noma_cf_no_ris,
        oma_cf,
        oma_cf_no_ris,
        optimized,
        epa_random_phase,
    };

    const char *to_string(SweepAxis axis);
    const char *to_string(Mode mode);
    SweepAxis parse_axis(const std::string &name);
    Mode parse_mode(const std::string &name);

    struct ExperimentSpec
    {
        SystemConfig base;
        SweepAxis axis = SweepAxis::rho_d_dbm;
        std::vector<double> values;
        std::vector<Mode> modes;
        int trials = 0;
        std::vector<std::uint64_t> seeds;
        JointParams optimizer;
        bool wall_time = false; // adds a wall-clock column; output is then not reproducible
        int threads = 0;        // 0: hardware concurrency

        // Throws ConfigError naming the offending key.
        void validate() const;
    };

    // JSON document with optional sections "system", "sweep" and "optimizer".
    ExperimentSpec parse_config(const std::string &text);
    std::string spec_to_json(const ExperimentSpec &spec);
    std::uint64_t config_hash(const ExperimentSpec &spec);

    // Configuration of one sweep point. The total_users axis fixes N = 2 and K = value / 2,
    // raising tau_p to K when needed.
    SystemConfig apply_axis(const SystemConfig &base, SweepAxis axis, double value);

    struct SweepRow
    {
        std::uint64_t seed = 0;
        double value = 0.0;
        Mode mode = Mode::noma_cf;
        double sum_se = 0.0;
        double ergodic_sum_se = 0.0; // NaN when trials = 0
        double ergodic_stderr = 0.0;
        double mean_ds = 0.0, mean_bu = 0.0, mean_iaci_i = 0.0, mean_iaci_r = 0.0, mean_ici = 0.0;
        double wall_seconds = 0.0;
    };

    // Rows in (seed, value, mode) order.
    std::vector<SweepRow> run_sweep(const ExperimentSpec &spec);
    std::string sweep_csv(const ExperimentSpec &spec, const std::vector<SweepRow> &rows);
    std::string run_experiment(const ExperimentSpec &spec);

} // namespace riscf

#endif
