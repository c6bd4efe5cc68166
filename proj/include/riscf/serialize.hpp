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

#ifndef RISCF_SERIALIZE_HPP
#define RISCF_SERIALIZE_HPP

#include "riscf/joint.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace riscf
{
    // Malformed document (bad JSON, wrong shapes or types).
    class ParseError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ull);
    std::uint64_t theta_hash(const PhaseVector &theta); // over the raw IEEE-754 bytes
    std::string hex64(std::uint64_t v);

    // System parameters as a JSON object; powers in dBm. Unknown keys and type
    // mismatches throw ConfigError naming the key.
    std::string config_to_json(const SystemConfig &config);
    SystemConfig config_from_json(const std::string &text);

    std::string scenario_to_json(const Scenario &scenario);
    Scenario scenario_from_json(const std::string &text);
    std::string scenario_id(const Scenario &scenario);

    // {"shape": [M, K, N], "eta": [...]} with eta in (m, k, n) row-major order.
    std::string eta_to_json(const RealTensor &eta);
    RealTensor eta_from_json(const std::string &text);

    // {"theta": [...]} in radians.
    std::string theta_to_json(const PhaseVector &theta);
    PhaseVector theta_from_json(const std::string &text);

    // Rows: scenario_id,theta_hash,k,n,sinr,ds,bu,iaci_i,iaci_r,ici,se,sum_se
    std::string se_report_csv(const SEReport &report, const std::string &scenario_id, const PhaseVector &theta);

    // Rows: iteration,block,surrogate,true_se,max_violation
    std::string qt_trace_csv(const QtResult &result);
    // Rows: iteration,global_best_se
    std::string pso_trace_csv(const PsoResult &result);
    // Rows: iteration,se_after_power,se_after_phase (iteration 0 is the starting point)
    std::string joint_trace_csv(const JointResult &result);

    // Shortest decimal text that round-trips the double.
    std::string format_double(double v);

    std::string read_file(const std::string &path);
    void write_file(const std::string &path, const std::string &content);

} // namespace riscf

#endif
