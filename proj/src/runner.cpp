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

#include "riscf/runner.hpp"
#include "riscf/serialize.hpp"
#include "serialize_detail.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace riscf
{
    using detail::json;
    using detail::ojson;

    namespace
    {
        constexpr std::pair<SweepAxis, const char *> kAxes[] = {
            {SweepAxis::rho_d_dbm, "rho_d_dbm"},
            {SweepAxis::total_users, "total_users"},
            {SweepAxis::L, "L"},
            {SweepAxis::M, "M"},
        };
        constexpr std::pair<Mode, const char *> kModes[] = {
            {Mode::noma_cf, "noma_cf"},
            {Mode::noma_cf_no_ris, "noma_cf_no_ris"},
            {Mode::oma_cf, "oma_cf"},
            {Mode::oma_cf_no_ris, "oma_cf_no_ris"},
            {Mode::optimized, "optimized"},
            {Mode::epa_random_phase, "epa_random_phase"},
        };
    } // namespace

    const char *to_string(SweepAxis axis)
    {
        for (const auto &[a, name] : kAxes)
            if (a == axis)
                return name;
        return "?";
    }

    const char *to_string(Mode mode)
    {
        for (const auto &[m, name] : kModes)
            if (m == mode)
                return name;
        return "?";
    }

    SweepAxis parse_axis(const std::string &name)
    {
        for (const auto &[a, n] : kAxes)
            if (name == n)
                return a;
        throw ConfigError("sweep.axis", "unknown axis '" + name + "'");
    }

    Mode parse_mode(const std::string &name)
    {
        for (const auto &[m, n] : kModes)
            if (name == n)
                return m;
        throw ConfigError("sweep.modes", "unknown mode '" + name + "'");
    }

    SystemConfig apply_axis(const SystemConfig &base, SweepAxis axis, double value)
    {
        SystemConfig c = base;
        auto integer = [&](const char *what)
        {
            if (!(value == std::floor(value)) || value < 1 || value > 1e6)
                throw ConfigError("sweep.values", std::string("axis ") + what + " needs positive integers");
            return static_cast<int>(value);
        };
        switch (axis)
        {
        case SweepAxis::rho_d_dbm:
            c.rho_d_dbm = value;
            break;
        case SweepAxis::total_users:
        {
            const int users = integer("total_users");
            if (users % 2 != 0)
                throw ConfigError("sweep.values", "total_users must be even (two users per cluster)");
            c.N = 2;
            c.K = users / 2;
            c.tau_p = std::max(base.tau_p, c.K);
            break;
        }
        case SweepAxis::L:
            c.L = integer("L");
            break;
        case SweepAxis::M:
            c.M = integer("M");
            break;
        }
        return c;
    }

    void ExperimentSpec::validate() const
    {
        base.validate();
        if (values.empty())
            throw ConfigError("sweep.values", "must not be empty");
        for (size_t i = 1; i < values.size(); ++i)
            if (!(values[i] > values[i - 1]))
                throw ConfigError("sweep.values", "must be strictly increasing");
        if (modes.empty())
            throw ConfigError("sweep.modes", "must not be empty");
        if (seeds.empty())
            throw ConfigError("sweep.seeds", "must not be empty");
        if (trials < 0)
            throw ConfigError("sweep.trials", "must be nonnegative");
        if (threads < 0)
            throw ConfigError("sweep.threads", "must be nonnegative");
        if (!(optimizer.epsilon >= 0.0))
            throw ConfigError("optimizer.epsilon", "must be nonnegative");
        if (optimizer.max_iterations < 1)
            throw ConfigError("optimizer.max_iterations", "must be positive");
        if (!(optimizer.qt.zeta > 0.0))
            throw ConfigError("optimizer.zeta", "must be positive");
        if (optimizer.qt.J1 < 1)
            throw ConfigError("optimizer.J1", "must be positive");
        if (optimizer.qt.J2 < 1)
            throw ConfigError("optimizer.J2", "must be positive");
        if (!(optimizer.qt.penalty_start > 0.0) || !(optimizer.qt.penalty_end >= optimizer.qt.penalty_start))
            throw ConfigError("optimizer.penalty_end", "penalty weights must satisfy 0 < start <= end");
        if (optimizer.pso.c1 + optimizer.pso.c2 <= 4.0)
            throw ConfigError("optimizer.c1", "c1 + c2 must exceed 4");
        if (optimizer.pso.swarm_size < 0)
            throw ConfigError("optimizer.swarm_size", "must be nonnegative");
        if (optimizer.pso.iterations < 0)
            throw ConfigError("optimizer.pso_iterations", "must be nonnegative");
        if (!(optimizer.pso.v_max >= optimizer.pso.v_min))
            throw ConfigError("optimizer.v_max", "must not be below v_min");

        // Every sweep point must be a valid system before anything runs.
        for (double v : values)
        {
            const SystemConfig c = apply_axis(base, axis, v);
            try
            {
                c.validate();
            }
            catch (const ConfigError &e)
            {
                throw ConfigError("sweep.values", "value " + format_double(v) + " gives an invalid system (" +
                                                      e.what() + ")");
            }
            for (Mode m : modes)
                if ((m == Mode::oma_cf || m == Mode::oma_cf_no_ris) && c.K * c.N >= c.tau_c)
                    throw ConfigError("sweep.modes", "OMA needs K*N < tau_c at value " + format_double(v));
        }
    }

    namespace
    {
        using Setter = std::function<void(const json &, const std::string &)>;

        void apply_section(const json &j, const std::string &section, const std::map<std::string, Setter> &setters)
        {
            if (!j.is_object())
                throw ConfigError(section, "expected an object");
            for (const auto &[key, value] : j.items())
            {
                const std::string name = section + "." + key;
                const auto it = setters.find(key);
                if (it == setters.end())
                    throw ConfigError(name, "unknown key");
                it->second(value, name);
            }
        }
    } // namespace

    ExperimentSpec parse_config(const std::string &text)
    {
        const json root = detail::parse_json(text);
        if (!root.is_object())
            throw ConfigError("config", "top level must be an object");
        for (const auto &[key, value] : root.items())
            if (key != "system" && key != "sweep" && key != "optimizer")
                throw ConfigError(key, "unknown key");

        ExperimentSpec spec;
        if (root.contains("system"))
            spec.base = detail::config_from_object(root.at("system"), "system");
        spec.optimizer.qt.r_min = spec.base.R_min;

        bool seeds_given = false, values_given = false;
        if (root.contains("sweep"))
        {
            const std::map<std::string, Setter> sweep = {
                {"axis", [&](const json &v, const std::string &k)
                 { spec.axis = parse_axis(detail::get_string(v, k)); }},
                {"values",
                 [&](const json &v, const std::string &k)
                 {
                     if (!v.is_array())
                         throw ConfigError(k, "expected an array of numbers");
                     spec.values.clear();
                     for (const json &e : v)
                         spec.values.push_back(detail::get_double(e, k));
                     values_given = true;
                 }},
                {"modes",
                 [&](const json &v, const std::string &k)
                 {
                     if (!v.is_array())
                         throw ConfigError(k, "expected an array of mode names");
                     spec.modes.clear();
                     for (const json &e : v)
                         spec.modes.push_back(parse_mode(detail::get_string(e, k)));
                 }},
                {"trials", [&](const json &v, const std::string &k) { spec.trials = detail::get_int(v, k); }},
                {"seeds",
                 [&](const json &v, const std::string &k)
                 {
                     if (!v.is_array())
                         throw ConfigError(k, "expected an array of integers");
                     spec.seeds.clear();
                     for (const json &e : v)
                         spec.seeds.push_back(detail::get_u64(e, k));
                     seeds_given = true;
                 }},
                {"wall_time", [&](const json &v, const std::string &k) { spec.wall_time = detail::get_bool(v, k); }},
                {"threads", [&](const json &v, const std::string &k) { spec.threads = detail::get_int(v, k); }},
            };
            apply_section(root.at("sweep"), "sweep", sweep);
        }
        if (root.contains("optimizer"))
        {
            JointParams &o = spec.optimizer;
            const std::map<std::string, Setter> opt = {
                {"epsilon", [&](const json &v, const std::string &k) { o.epsilon = detail::get_double(v, k); }},
                {"max_iterations",
                 [&](const json &v, const std::string &k) { o.max_iterations = detail::get_int(v, k); }},
                {"zeta", [&](const json &v, const std::string &k) { o.qt.zeta = detail::get_double(v, k); }},
                {"J1", [&](const json &v, const std::string &k) { o.qt.J1 = detail::get_int(v, k); }},
                {"J2", [&](const json &v, const std::string &k) { o.qt.J2 = detail::get_int(v, k); }},
                {"penalty_start",
                 [&](const json &v, const std::string &k) { o.qt.penalty_start = detail::get_double(v, k); }},
                {"penalty_end",
                 [&](const json &v, const std::string &k) { o.qt.penalty_end = detail::get_double(v, k); }},
                {"penalty_ramp",
                 [&](const json &v, const std::string &k) { o.qt.penalty_ramp = detail::get_int(v, k); }},
                {"c1", [&](const json &v, const std::string &k) { o.pso.c1 = detail::get_double(v, k); }},
                {"c2", [&](const json &v, const std::string &k) { o.pso.c2 = detail::get_double(v, k); }},
                {"swarm_size",
                 [&](const json &v, const std::string &k) { o.pso.swarm_size = detail::get_int(v, k); }},
                {"pso_iterations",
                 [&](const json &v, const std::string &k) { o.pso.iterations = detail::get_int(v, k); }},
                {"v_min", [&](const json &v, const std::string &k) { o.pso.v_min = detail::get_double(v, k); }},
                {"v_max", [&](const json &v, const std::string &k) { o.pso.v_max = detail::get_double(v, k); }},
            };
            apply_section(root.at("optimizer"), "optimizer", opt);
        }

        if (!values_given)
            spec.values = {spec.base.rho_d_dbm};
        if (spec.modes.empty() && !(root.contains("sweep") && root.at("sweep").contains("modes")))
            spec.modes = {Mode::noma_cf};
        if (!seeds_given)
            spec.seeds = {spec.base.seed};
        spec.validate();
        return spec;
    }

    std::string spec_to_json(const ExperimentSpec &spec)
    {
        ojson j;
        j["system"] = detail::config_object(spec.base);
        ojson sweep;
        sweep["axis"] = to_string(spec.axis);
        sweep["values"] = spec.values;
        ojson modes = ojson::array();
        for (Mode m : spec.modes)
            modes.push_back(to_string(m));
        sweep["modes"] = modes;
        sweep["trials"] = spec.trials;
        sweep["seeds"] = spec.seeds;
        sweep["wall_time"] = spec.wall_time;
        sweep["threads"] = spec.threads;
        j["sweep"] = sweep;
        const JointParams &o = spec.optimizer;
        ojson opt;
        opt["epsilon"] = o.epsilon;
        opt["max_iterations"] = o.max_iterations;
        opt["zeta"] = o.qt.zeta;
        opt["J1"] = o.qt.J1;
        opt["J2"] = o.qt.J2;
        opt["penalty_start"] = o.qt.penalty_start;
        opt["penalty_end"] = o.qt.penalty_end;
        opt["penalty_ramp"] = o.qt.penalty_ramp;
        opt["c1"] = o.pso.c1;
        opt["c2"] = o.pso.c2;
        opt["swarm_size"] = o.pso.swarm_size;
        opt["pso_iterations"] = o.pso.iterations;
        opt["v_min"] = o.pso.v_min;
        opt["v_max"] = o.pso.v_max;
        j["optimizer"] = opt;
        return j.dump(2) + "\n";
    }

    std::uint64_t config_hash(const ExperimentSpec &spec)
    {
        ExperimentSpec canonical = spec;
        canonical.threads = 0; // scheduling does not change results
        return fnv1a64(spec_to_json(canonical));
    }

    namespace
    {
        SweepRow run_point(const ExperimentSpec &spec, std::uint64_t seed, double value, Mode mode, int mc_threads)
        {
            const auto start = std::chrono::steady_clock::now();
            SystemConfig config = apply_axis(spec.base, spec.axis, value);
            config.seed = seed;
            const Scenario drop = generate_scenario(config);

            RealTensor eta;
            PhaseVector theta;
            joint_initial_point(drop, seed, eta, theta);

            Scenario target;
            switch (mode)
            {
            case Mode::noma_cf:
            case Mode::epa_random_phase:
            case Mode::optimized:
                target = drop;
                break;
            case Mode::noma_cf_no_ris:
                target = without_ris(drop);
                break;
            case Mode::oma_cf:
                target = as_orthogonal(drop);
                break;
            case Mode::oma_cf_no_ris:
                target = as_orthogonal(without_ris(drop));
                break;
            }

            if (mode == Mode::optimized)
            {
                JointParams jp = spec.optimizer;
                jp.seed = seed;
                jp.qt.r_min = config.R_min;
                const JointResult jr = alternate_optimize(target, jp);
                eta = jr.eta;
                theta = jr.theta;
            }
            else
            {
                eta = equal_power_allocation(channel_stats(target, theta));
            }

            const SEReport rep = evaluate(target, theta, eta);
            SweepRow row;
            row.seed = seed;
            row.value = value;
            row.mode = mode;
            row.sum_se = rep.sum_se;
            row.mean_ds = rep.ds.mean();
            row.mean_bu = rep.bu.mean();
            row.mean_iaci_i = rep.iaci_i.mean();
            row.mean_iaci_r = rep.iaci_r.mean();
            row.mean_ici = rep.ici.mean();
            row.ergodic_sum_se = std::numeric_limits<double>::quiet_NaN();
            row.ergodic_stderr = std::numeric_limits<double>::quiet_NaN();
            if (spec.trials > 0)
            {
                const ErgodicResult er = ergodic_se(target, theta, eta, spec.trials, seed, mc_threads);
                row.ergodic_sum_se = er.sum_se;
                row.ergodic_stderr = er.sum_se_stderr;
            }
            row.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return row;
        }
    } // namespace

    std::vector<SweepRow> run_sweep(const ExperimentSpec &spec)
    {
        spec.validate();
        struct Job
        {
            std::uint64_t seed;
            double value;
            Mode mode;
        };
        std::vector<Job> jobs;
        for (std::uint64_t seed : spec.seeds)
            for (double v : spec.values)
                for (Mode m : spec.modes)
                    jobs.push_back({seed, v, m});

        std::vector<SweepRow> rows(jobs.size());
        int workers = spec.threads > 0 ? spec.threads : static_cast<int>(std::thread::hardware_concurrency());
        workers = std::clamp(workers, 1, static_cast<int>(jobs.size()));
        const int mc_threads = workers == 1 ? spec.threads : 1;

        std::atomic<size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&]
        {
            for (size_t i = next++; i < jobs.size(); i = next++)
            {
                try
                {
                    rows[i] = run_point(spec, jobs[i].seed, jobs[i].value, jobs[i].mode, mc_threads);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        };
        if (workers == 1)
            work();
        else
        {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w)
                pool.emplace_back(work);
            for (auto &t : pool)
                t.join();
        }
        if (failure)
            std::rethrow_exception(failure);
        return rows;
    }

    std::string sweep_csv(const ExperimentSpec &spec, const std::vector<SweepRow> &rows)
    {
        std::ostringstream out;
        out << "# config_hash=" << hex64(config_hash(spec)) << '\n';
        out << "seed," << to_string(spec.axis)
            << ",mode,sum_se,ergodic_sum_se,ergodic_stderr,mean_ds,mean_bu,mean_iaci_i,mean_iaci_r,mean_ici";
        if (spec.wall_time)
            out << ",wall_seconds";
        out << '\n';
        for (const SweepRow &r : rows)
        {
            out << r.seed << ',' << format_double(r.value) << ',' << to_string(r.mode) << ','
                << format_double(r.sum_se) << ',' << format_double(r.ergodic_sum_se) << ','
                << format_double(r.ergodic_stderr) << ',' << format_double(r.mean_ds) << ','
                << format_double(r.mean_bu) << ',' << format_double(r.mean_iaci_i) << ','
                << format_double(r.mean_iaci_r) << ',' << format_double(r.mean_ici);
            if (spec.wall_time)
                out << ',' << format_double(r.wall_seconds);
            out << '\n';
        }
        return out.str();
    }

    std::string run_experiment(const ExperimentSpec &spec)
    {
        return sweep_csv(spec, run_sweep(spec));
    }

} // namespace riscf
