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

// JSON helpers shared by the serialisation and configuration parsers.

#ifndef RISCF_SERIALIZE_DETAIL_HPP
#define RISCF_SERIALIZE_DETAIL_HPP

#include "riscf/config.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace riscf::detail
{
    using json = nlohmann::json;
    using ojson = nlohmann::ordered_json;

    json parse_json(const std::string &text);

    double get_double(const json &j, const std::string &key);
    int get_int(const json &j, const std::string &key);
    std::uint64_t get_u64(const json &j, const std::string &key);
    bool get_bool(const json &j, const std::string &key);
    std::string get_string(const json &j, const std::string &key);

    ojson config_object(const SystemConfig &config);
    SystemConfig config_from_object(const json &j, const std::string &prefix);
}

#endif
