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

#include "riscf/serialize.hpp"
#include "serialize_detail.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <system_error>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace riscf
{
    std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t hash)
    {
        for (unsigned char c : bytes)
        {
            hash ^= c;
            hash *= 0x100000001b3ull;
        }
        return hash;
    }

    std::uint64_t theta_hash(const PhaseVector &theta)
    {
        const auto &v = theta.values();
        return fnv1a64(std::string_view(reinterpret_cast<const char *>(v.data()), v.size() * sizeof(double)));
    }

    std::string hex64(std::uint64_t v)
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
        return buf;
    }

    std::string format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    }

    std::string read_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::system_error(errno, std::generic_category(), "cannot open " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write_file(const std::string &path, const std::string &content)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::system_error(errno, std::generic_category(), "cannot write " + path);
        out << content;
        if (!out)
            throw std::system_error(errno, std::generic_category(), "write failed for " + path);
    }

    namespace detail
    {
        json parse_json(const std::string &text)
        {
            try
            {
                return json::parse(text);
            }
            catch (const json::parse_error &e)
            {
                throw ParseError(std::string("invalid JSON: ") + e.what());
            }
        }

        double get_double(const json &j, const std::string &key)
        {
            if (!j.is_number())
                throw ConfigError(key, "expected a number");
            return j.get<double>();
        }

        int get_int(const json &j, const std::string &key)
        {
            if (j.is_number_integer())
            {
                const auto v = j.get<std::int64_t>();
                if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
                    throw ConfigError(key, "integer out of range");
                return static_cast<int>(v);
            }
            throw ConfigError(key, "expected an integer");
        }

        std::uint64_t get_u64(const json &j, const std::string &key)
        {
            if (j.is_number_unsigned())
                return j.get<std::uint64_t>();
            if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
                return static_cast<std::uint64_t>(j.get<std::int64_t>());
            throw ConfigError(key, "expected a nonnegative integer");
        }

        bool get_bool(const json &j, const std::string &key)
        {
            if (!j.is_boolean())
                throw ConfigError(key, "expected true or false");
            return j.get<bool>();
        }

        std::string get_string(const json &j, const std::string &key)
        {
            if (!j.is_string())
                throw ConfigError(key, "expected a string");
            return j.get<std::string>();
        }

        ojson config_object(const SystemConfig &c)
        {
            ojson j;
            j["M"] = c.M;
            j["K"] = c.K;
            j["N"] = c.N;
            j["L"] = c.L;
            j["tau_c"] = c.tau_c;
            j["tau_p"] = c.tau_p;
            j["rho_d_dbm"] = c.rho_d_dbm;
            j["rho_p_dbm"] = c.rho_p_dbm;
            j["noise_dbm"] = c.noise_dbm;
            j["carrier_hz"] = c.carrier_hz;
            j["bandwidth_hz"] = c.bandwidth_hz;
            j["d_H"] = c.d_H;
            j["d_V"] = c.d_V;
            j["area_half_width"] = c.area_half_width;
            j["d_min"] = c.d_min;
            j["ris_position"] = {c.ris_position.x, c.ris_position.y};
            j["ap_height"] = c.ap_height;
            j["ris_height"] = c.ris_height;
            j["user_height"] = c.user_height;
            j["sigma_sh_direct"] = c.sigma_sh_direct;
            j["sigma_sh_ris"] = c.sigma_sh_ris;
            j["R_min"] = c.R_min;
            j["correlated"] = c.correlated;
            j["seed"] = c.seed;
            return j;
        }

        SystemConfig config_from_object(const json &j, const std::string &prefix)
        {
            if (!j.is_object())
                throw ConfigError(prefix.empty() ? "system" : prefix, "expected an object");
            SystemConfig c;
            bool spacing_given = false;
            using Setter = std::function<void(const json &, const std::string &)>;
            const std::map<std::string, Setter> setters = {
                {"M", [&](const json &v, const std::string &k) { c.M = get_int(v, k); }},
                {"K", [&](const json &v, const std::string &k) { c.K = get_int(v, k); }},
                {"N", [&](const json &v, const std::string &k) { c.N = get_int(v, k); }},
                {"L", [&](const json &v, const std::string &k) { c.L = get_int(v, k); }},
                {"tau_c", [&](const json &v, const std::string &k) { c.tau_c = get_int(v, k); }},
                {"tau_p", [&](const json &v, const std::string &k) { c.tau_p = get_int(v, k); }},
                {"rho_d_dbm", [&](const json &v, const std::string &k) { c.rho_d_dbm = get_double(v, k); }},
                {"rho_p_dbm", [&](const json &v, const std::string &k) { c.rho_p_dbm = get_double(v, k); }},
                {"noise_dbm", [&](const json &v, const std::string &k) { c.noise_dbm = get_double(v, k); }},
                {"carrier_hz", [&](const json &v, const std::string &k) { c.carrier_hz = get_double(v, k); }},
                {"bandwidth_hz", [&](const json &v, const std::string &k) { c.bandwidth_hz = get_double(v, k); }},
                {"d_H",
                 [&](const json &v, const std::string &k)
                 {
                     c.d_H = get_double(v, k);
                     spacing_given = true;
                 }},
                {"d_V",
                 [&](const json &v, const std::string &k)
                 {
                     c.d_V = get_double(v, k);
                     spacing_given = true;
                 }},
                {"area_half_width",
                 [&](const json &v, const std::string &k) { c.area_half_width = get_double(v, k); }},
                {"d_min", [&](const json &v, const std::string &k) { c.d_min = get_double(v, k); }},
                {"ris_position",
                 [&](const json &v, const std::string &k)
                 {
                     if (!v.is_array() || v.size() != 2)
                         throw ConfigError(k, "expected [x, y]");
                     c.ris_position = {get_double(v[0], k), get_double(v[1], k)};
                 }},
                {"ap_height", [&](const json &v, const std::string &k) { c.ap_height = get_double(v, k); }},
                {"ris_height", [&](const json &v, const std::string &k) { c.ris_height = get_double(v, k); }},
                {"user_height", [&](const json &v, const std::string &k) { c.user_height = get_double(v, k); }},
                {"sigma_sh_direct",
                 [&](const json &v, const std::string &k) { c.sigma_sh_direct = get_double(v, k); }},
                {"sigma_sh_ris", [&](const json &v, const std::string &k) { c.sigma_sh_ris = get_double(v, k); }},
                {"R_min", [&](const json &v, const std::string &k) { c.R_min = get_double(v, k); }},
                {"correlated", [&](const json &v, const std::string &k) { c.correlated = get_bool(v, k); }},
                {"seed", [&](const json &v, const std::string &k) { c.seed = get_u64(v, k); }},
            };
            const std::string dot = prefix.empty() ? "" : prefix + ".";
            for (const auto &[key, value] : j.items())
            {
                const auto it = setters.find(key);
                if (it == setters.end())
                    throw ConfigError(dot + key, "unknown key");
                it->second(value, dot + key);
            }
            if (!spacing_given)
                c.d_H = c.d_V = c.lambda_c() / 4.0;
            try
            {
                c.validate();
            }
            catch (const ConfigError &e)
            {
                const std::string msg = e.what();
                throw ConfigError(dot + e.key(), msg.substr(std::min(msg.size(), e.key().size() + 2)));
            }
            return c;
        }
    } // namespace detail

    using detail::json;
    using detail::ojson;

    std::string config_to_json(const SystemConfig &config)
    {
        return detail::config_object(config).dump(2) + "\n";
    }

    SystemConfig config_from_json(const std::string &text)
    {
        return detail::config_from_object(detail::parse_json(text), "");
    }

    namespace
    {
        ojson point_array(const std::vector<Point2> &pts)
        {
            ojson a = ojson::array();
            for (const Point2 &p : pts)
                a.push_back({p.x, p.y});
            return a;
        }

        ojson matrix_rows(const Eigen::MatrixXd &m)
        {
            ojson a = ojson::array();
            for (int r = 0; r < m.rows(); ++r)
            {
                ojson row = ojson::array();
                for (int c = 0; c < m.cols(); ++c)
                    row.push_back(m(r, c));
                a.push_back(std::move(row));
            }
            return a;
        }

        const json &field(const json &j, const char *key)
        {
            if (!j.is_object() || !j.contains(key))
                throw ParseError(std::string("missing field '") + key + "'");
            return j.at(key);
        }

        double number(const json &j, const char *what)
        {
            if (!j.is_number())
                throw ParseError(std::string("non-numeric entry in '") + what + "'");
            return j.get<double>();
        }

        std::vector<double> number_list(const json &j, const char *what)
        {
            if (!j.is_array())
                throw ParseError(std::string("'") + what + "' must be an array");
            std::vector<double> v;
            v.reserve(j.size());
            for (const json &e : j)
                v.push_back(number(e, what));
            return v;
        }

        std::vector<Point2> points(const json &j, const char *what)
        {
            if (!j.is_array())
                throw ParseError(std::string("'") + what + "' must be an array");
            std::vector<Point2> out;
            for (const json &e : j)
            {
                if (!e.is_array() || e.size() != 2)
                    throw ParseError(std::string("'") + what + "' entries must be [x, y]");
                out.push_back({number(e[0], what), number(e[1], what)});
            }
            return out;
        }

        Eigen::MatrixXd matrix(const json &j, int rows, int cols, const char *what)
        {
            if (!j.is_array() || static_cast<int>(j.size()) != rows)
                throw ParseError(std::string("'") + what + "' must have " + std::to_string(rows) + " rows");
            Eigen::MatrixXd m(rows, cols);
            for (int r = 0; r < rows; ++r)
            {
                const std::vector<double> row = number_list(j[r], what);
                if (static_cast<int>(row.size()) != cols)
                    throw ParseError(std::string("'") + what + "' rows must have " + std::to_string(cols) +
                                     " entries");
                for (int c = 0; c < cols; ++c)
                    m(r, c) = row[c];
            }
            return m;
        }

        RealTensor tensor(const json &shape, const json &data, const char *what)
        {
            const std::vector<double> dims = number_list(shape, "shape");
            if (dims.size() != 3)
                throw ParseError("'shape' must be [M, K, N]");
            for (double d : dims)
                if (d < 1 || d != std::floor(d))
                    throw ParseError("'shape' entries must be positive integers");
            RealTensor t(static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]));
            const std::vector<double> v = number_list(data, what);
            if (v.size() != t.size())
                throw ParseError(std::string("'") + what + "' has " + std::to_string(v.size()) +
                                 " entries, shape needs " + std::to_string(t.size()));
            t.data() = v;
            return t;
        }
    } // namespace

    std::string scenario_to_json(const Scenario &s)
    {
        ojson j;
        j["config"] = detail::config_object(s.config);
        j["ap_positions"] = point_array(s.ap_positions);
        j["user_positions"] = point_array(s.user_positions);
        j["ris_position"] = {s.ris_position.x, s.ris_position.y};
        j["beta_direct"] = {{"shape", {s.M(), s.K(), s.N()}}, {"data", s.beta_direct.data()}};
        j["beta_ap_ris"] = s.beta_ap_ris;
        j["beta_ris_user"] = matrix_rows(s.beta_ris_user);
        j["corr"] = matrix_rows(s.corr);
        j["clusters"] = s.clusters;
        return j.dump() + "\n";
    }

    Scenario scenario_from_json(const std::string &text)
    {
        const json j = detail::parse_json(text);
        Scenario s;
        s.config = detail::config_from_object(field(j, "config"), "config");
        const int M = s.M(), K = s.K(), N = s.N(), L = s.L();
        s.ap_positions = points(field(j, "ap_positions"), "ap_positions");
        s.user_positions = points(field(j, "user_positions"), "user_positions");
        const std::vector<double> ris = number_list(field(j, "ris_position"), "ris_position");
        if (ris.size() != 2)
            throw ParseError("'ris_position' must be [x, y]");
        s.ris_position = {ris[0], ris[1]};
        const json &bd = field(j, "beta_direct");
        s.beta_direct = tensor(field(bd, "shape"), field(bd, "data"), "beta_direct");
        if (s.beta_direct.M() != M || s.beta_direct.K() != K || s.beta_direct.N() != N)
            throw ParseError("'beta_direct' shape does not match the configuration");
        s.beta_ap_ris = number_list(field(j, "beta_ap_ris"), "beta_ap_ris");
        s.beta_ris_user = matrix(field(j, "beta_ris_user"), K, N, "beta_ris_user");
        s.corr = matrix(field(j, "corr"), L, L, "corr");
        const json &cl = field(j, "clusters");
        if (!cl.is_array())
            throw ParseError("'clusters' must be an array");
        for (const json &c : cl)
        {
            std::vector<int> members;
            if (!c.is_array())
                throw ParseError("'clusters' entries must be arrays");
            for (const json &e : c)
            {
                if (!e.is_number_integer())
                    throw ParseError("'clusters' entries must be integers");
                members.push_back(e.get<int>());
            }
            s.clusters.push_back(std::move(members));
        }
        try
        {
            s.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw ParseError(std::string("invalid scenario: ") + e.what());
        }
        return s;
    }

    std::string scenario_id(const Scenario &scenario)
    {
        return hex64(fnv1a64(scenario_to_json(scenario)));
    }

    std::string eta_to_json(const RealTensor &eta)
    {
        ojson j;
        j["shape"] = {eta.M(), eta.K(), eta.N()};
        j["eta"] = eta.data();
        return j.dump() + "\n";
    }

    RealTensor eta_from_json(const std::string &text)
    {
        const json j = detail::parse_json(text);
        RealTensor t = tensor(field(j, "shape"), field(j, "eta"), "eta");
        for (double v : t.data())
            if (!(v >= 0.0) || !std::isfinite(v))
                throw ParseError("'eta' entries must be finite and nonnegative");
        return t;
    }

    std::string theta_to_json(const PhaseVector &theta)
    {
        ojson j;
        j["theta"] = theta.values();
        return j.dump() + "\n";
    }

    PhaseVector theta_from_json(const std::string &text)
    {
        const json j = detail::parse_json(text);
        std::vector<double> v = number_list(field(j, "theta"), "theta");
        for (double a : v)
            if (!std::isfinite(a))
                throw ParseError("'theta' entries must be finite");
        return PhaseVector(std::move(v));
    }

    std::string se_report_csv(const SEReport &r, const std::string &id, const PhaseVector &theta)
    {
        std::ostringstream out;
        out << "scenario_id,theta_hash,k,n,sinr,ds,bu,iaci_i,iaci_r,ici,se,sum_se\n";
        const std::string th = hex64(theta_hash(theta));
        for (int k = 0; k < r.sinr.rows(); ++k)
            for (int n = 0; n < r.sinr.cols(); ++n)
                out << id << ',' << th << ',' << k << ',' << n << ',' << format_double(r.sinr(k, n)) << ','
                    << format_double(r.ds(k, n)) << ',' << format_double(r.bu(k, n)) << ','
                    << format_double(r.iaci_i(k, n)) << ',' << format_double(r.iaci_r(k, n)) << ','
                    << format_double(r.ici(k, n)) << ',' << format_double(r.se(k, n)) << ','
                    << format_double(r.sum_se) << '\n';
        return out.str();
    }

    std::string qt_trace_csv(const QtResult &result)
    {
        std::ostringstream out;
        out << "iteration,block,surrogate,true_se,max_violation\n";
        for (const QtTraceRow &r : result.trace)
            out << r.iteration << ',' << r.block << ',' << format_double(r.surrogate) << ','
                << format_double(r.true_se) << ',' << format_double(r.max_violation) << '\n';
        return out.str();
    }

    std::string pso_trace_csv(const PsoResult &result)
    {
        std::ostringstream out;
        out << "iteration,global_best_se\n";
        for (size_t t = 0; t < result.trace.size(); ++t)
            out << t << ',' << format_double(result.trace[t]) << '\n';
        return out.str();
    }

    std::string joint_trace_csv(const JointResult &result)
    {
        std::ostringstream out;
        out << "iteration,se_after_power,se_after_phase\n";
        out << 0 << ',' << format_double(result.initial_se) << ',' << format_double(result.initial_se) << '\n';
        for (const JointIteration &it : result.iterations)
            out << it.iteration << ',' << format_double(it.se_after_power) << ','
                << format_double(it.se_after_phase) << '\n';
        return out.str();
    }

} // namespace riscf
