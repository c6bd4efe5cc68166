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

#include "riscf/riscf.h"

#include "riscf/runner.hpp"
#include "riscf/serialize.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <system_error>

struct riscf_config
{
    riscf::ExperimentSpec spec;
};

struct riscf_scenario
{
    riscf::Scenario scenario;
};

struct riscf_solution
{
    riscf::RealTensor eta;
    riscf::PhaseVector theta;
};

namespace
{
    thread_local std::string last_error;

    riscf_status fail(riscf_status status, const std::string &message)
    {
        last_error = message;
        return status;
    }

    // Maps exceptions thrown by the core onto status codes.
    template <typename F>
    riscf_status guarded(F &&body)
    {
        try
        {
            last_error.clear();
            body();
            return RISCF_OK;
        }
        catch (const riscf::ParseError &e)
        {
            return fail(RISCF_ERR_PARSE, e.what());
        }
        catch (const std::system_error &e)
        {
            return fail(RISCF_ERR_IO, e.what());
        }
        catch (const std::invalid_argument &e)
        {
            return fail(RISCF_ERR_INVALID_ARGUMENT, e.what());
        }
        catch (const std::bad_alloc &)
        {
            return fail(RISCF_ERR_INTERNAL, "out of memory");
        }
        catch (const std::runtime_error &e)
        {
            return fail(RISCF_ERR_NUMERIC, e.what());
        }
        catch (const std::exception &e)
        {
            return fail(RISCF_ERR_INTERNAL, e.what());
        }
        catch (...)
        {
            return fail(RISCF_ERR_INTERNAL, "unknown error");
        }
    }

    char *copy_string(const std::string &s)
    {
        char *p = static_cast<char *>(std::malloc(s.size() + 1));
        if (!p)
            throw std::bad_alloc();
        std::memcpy(p, s.c_str(), s.size() + 1);
        return p;
    }

    void require(bool ok, const char *message)
    {
        if (!ok)
            throw std::invalid_argument(message);
    }

    riscf_status copy_values(const std::vector<double> &v, double *out, int capacity, int *count)
    {
        if (!count)
            return fail(RISCF_ERR_INVALID_ARGUMENT, "count must not be NULL");
        *count = static_cast<int>(v.size());
        if (!out)
            return RISCF_OK;
        if (capacity < static_cast<int>(v.size()))
            return fail(RISCF_ERR_INVALID_ARGUMENT, "output buffer too small");
        std::copy(v.begin(), v.end(), out);
        return RISCF_OK;
    }
} // namespace

extern "C" {

const char *riscf_version(void)
{
    return "1.0.0";
}

const char *riscf_last_error(void)
{
    return last_error.c_str();
}

const char *riscf_status_string(riscf_status status)
{
    switch (status)
    {
    case RISCF_OK:
        return "ok";
    case RISCF_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case RISCF_ERR_PARSE:
        return "parse error";
    case RISCF_ERR_IO:
        return "i/o error";
    case RISCF_ERR_NUMERIC:
        return "numerical error";
    case RISCF_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

void riscf_string_free(char *s)
{
    std::free(s);
}

riscf_status riscf_config_default(riscf_config **out)
{
    return guarded(
        [&]
        {
            require(out, "out must not be NULL");
            *out = new riscf_config{riscf::parse_config("{}")};
        });
}

riscf_status riscf_config_parse(const char *json_text, riscf_config **out)
{
    return guarded(
        [&]
        {
            require(json_text && out, "arguments must not be NULL");
            *out = new riscf_config{riscf::parse_config(json_text)};
        });
}

riscf_status riscf_config_load(const char *path, riscf_config **out)
{
    return guarded(
        [&]
        {
            require(path && out, "arguments must not be NULL");
            *out = new riscf_config{riscf::parse_config(riscf::read_file(path))};
        });
}

riscf_status riscf_config_to_json(const riscf_config *config, char **out_json)
{
    return guarded(
        [&]
        {
            require(config && out_json, "arguments must not be NULL");
            *out_json = copy_string(riscf::spec_to_json(config->spec));
        });
}

riscf_status riscf_config_set_seed(riscf_config *config, uint64_t seed)
{
    return guarded(
        [&]
        {
            require(config, "config must not be NULL");
            config->spec.base.seed = seed;
            config->spec.seeds = {seed};
        });
}

riscf_status riscf_config_set_trials(riscf_config *config, int trials)
{
    return guarded(
        [&]
        {
            require(config, "config must not be NULL");
            require(trials >= 0, "trials must be nonnegative");
            config->spec.trials = trials;
        });
}

void riscf_config_free(riscf_config *config)
{
    delete config;
}

riscf_status riscf_scenario_generate(const riscf_config *config, riscf_scenario **out)
{
    return guarded(
        [&]
        {
            require(config && out, "arguments must not be NULL");
            *out = new riscf_scenario{riscf::generate_scenario(config->spec.base)};
        });
}

riscf_status riscf_scenario_load(const char *path, riscf_scenario **out)
{
    return guarded(
        [&]
        {
            require(path && out, "arguments must not be NULL");
            *out = new riscf_scenario{riscf::scenario_from_json(riscf::read_file(path))};
        });
}

riscf_status riscf_scenario_save(const riscf_scenario *scenario, const char *path)
{
    return guarded(
        [&]
        {
            require(scenario && path, "arguments must not be NULL");
            riscf::write_file(path, riscf::scenario_to_json(scenario->scenario));
        });
}

riscf_status riscf_scenario_dims(const riscf_scenario *scenario, int *M, int *K, int *N, int *L)
{
    return guarded(
        [&]
        {
            require(scenario, "scenario must not be NULL");
            if (M)
                *M = scenario->scenario.M();
            if (K)
                *K = scenario->scenario.K();
            if (N)
                *N = scenario->scenario.N();
            if (L)
                *L = scenario->scenario.L();
        });
}

void riscf_scenario_free(riscf_scenario *scenario)
{
    delete scenario;
}

riscf_status riscf_solution_load_files(const riscf_scenario *scenario, const char *eta_path, const char *theta_path,
                                       riscf_solution **out)
{
    return guarded(
        [&]
        {
            require(scenario && out, "arguments must not be NULL");
            const riscf::Scenario &s = scenario->scenario;
            auto sol = std::make_unique<riscf_solution>();
            sol->theta = theta_path ? riscf::theta_from_json(riscf::read_file(theta_path))
                                    : riscf::PhaseVector::zeros(s.L());
            if (sol->theta.size() != s.L())
                throw riscf::ParseError("theta has " + std::to_string(sol->theta.size()) +
                                        " entries, the scenario has L = " + std::to_string(s.L()));
            if (eta_path)
            {
                sol->eta = riscf::eta_from_json(riscf::read_file(eta_path));
                if (sol->eta.M() != s.M() || sol->eta.K() != s.K() || sol->eta.N() != s.N())
                    throw riscf::ParseError("eta shape does not match the scenario");
            }
            else
            {
                sol->eta = riscf::equal_power_allocation(riscf::channel_stats(s, sol->theta));
            }
            *out = sol.release();
        });
}

riscf_status riscf_solution_save_files(const riscf_solution *solution, const char *eta_path, const char *theta_path)
{
    return guarded(
        [&]
        {
            require(solution, "solution must not be NULL");
            if (eta_path)
                riscf::write_file(eta_path, riscf::eta_to_json(solution->eta));
            if (theta_path)
                riscf::write_file(theta_path, riscf::theta_to_json(solution->theta));
        });
}

riscf_status riscf_solution_get_eta(const riscf_solution *solution, double *out, int capacity, int *count)
{
    if (!solution)
        return fail(RISCF_ERR_INVALID_ARGUMENT, "solution must not be NULL");
    return copy_values(solution->eta.data(), out, capacity, count);
}

riscf_status riscf_solution_get_theta(const riscf_solution *solution, double *out, int capacity, int *count)
{
    if (!solution)
        return fail(RISCF_ERR_INVALID_ARGUMENT, "solution must not be NULL");
    return copy_values(solution->theta.values(), out, capacity, count);
}

void riscf_solution_free(riscf_solution *solution)
{
    delete solution;
}

riscf_status riscf_evaluate(const riscf_scenario *scenario, const riscf_solution *solution, int trials,
                            uint64_t seed, char **report_csv, double *sum_se, double *ergodic_sum_se,
                            double *ergodic_stderr)
{
    return guarded(
        [&]
        {
            require(scenario && solution, "scenario and solution must not be NULL");
            require(trials >= 0, "trials must be nonnegative");
            const riscf::Scenario &s = scenario->scenario;
            const riscf::SEReport rep = riscf::evaluate(s, solution->theta, solution->eta);
            if (trials > 0)
            {
                const riscf::ErgodicResult er = riscf::ergodic_se(s, solution->theta, solution->eta, trials, seed);
                if (ergodic_sum_se)
                    *ergodic_sum_se = er.sum_se;
                if (ergodic_stderr)
                    *ergodic_stderr = er.sum_se_stderr;
            }
            if (sum_se)
                *sum_se = rep.sum_se;
            if (report_csv)
                *report_csv = copy_string(riscf::se_report_csv(rep, riscf::scenario_id(s), solution->theta));
        });
}

riscf_status riscf_optimize(const riscf_scenario *scenario, const riscf_config *config, riscf_algorithm algorithm,
                            const riscf_solution *init, uint64_t seed, riscf_solution **out, char **trace_csv,
                            double *sum_se)
{
    return guarded(
        [&]
        {
            require(scenario && out, "scenario and out must not be NULL");
            const riscf::Scenario &s = scenario->scenario;
            riscf::JointParams params = config ? config->spec.optimizer : riscf::JointParams{};
            params.seed = seed;
            params.pso.seed = seed;
            params.qt.r_min = s.config.R_min;
            if (init)
                require(init->eta.M() == s.M() && init->eta.K() == s.K() && init->eta.N() == s.N() &&
                            init->theta.size() == s.L(),
                        "initial solution does not match the scenario");

            auto sol = std::make_unique<riscf_solution>();
            std::string trace;
            double se = 0.0;
            switch (algorithm)
            {
            case RISCF_ALGO_QT:
            {
                const riscf::PhaseVector theta = init ? init->theta : riscf::PhaseVector::zeros(s.L());
                const riscf::ChannelStats stats = riscf::channel_stats(s, theta);
                const riscf::RealTensor start = init ? riscf::scale_to_feasible(stats, init->eta)
                                                     : riscf::equal_power_allocation(stats);
                const riscf::QtResult r = riscf::successive_qt(stats, s.config.rho_d(), riscf::order_users(stats),
                                                               s.config.prelog(), start, params.qt);
                sol->eta = r.eta;
                sol->theta = theta;
                trace = riscf::qt_trace_csv(r);
                se = r.sum_se;
                break;
            }
            case RISCF_ALGO_PSO:
            {
                riscf::RealTensor eta;
                riscf::PhaseVector theta;
                riscf::joint_initial_point(s, seed, eta, theta);
                if (init)
                {
                    eta = init->eta;
                    theta = init->theta;
                }
                const riscf::PsoResult r = riscf::pso_optimize(s, eta, params.pso, init ? &theta : nullptr);
                sol->eta = r.eta;
                sol->theta = r.theta;
                trace = riscf::pso_trace_csv(r);
                se = r.sum_se;
                break;
            }
            case RISCF_ALGO_JOINT:
            {
                const riscf::JointResult r = riscf::alternate_optimize(s, params);
                sol->eta = r.eta;
                sol->theta = r.theta;
                trace = riscf::joint_trace_csv(r);
                se = r.sum_se;
                break;
            }
            default:
                throw std::invalid_argument("unknown algorithm");
            }
            if (trace_csv)
                *trace_csv = copy_string(trace);
            if (sum_se)
                *sum_se = se;
            *out = sol.release();
        });
}

riscf_status riscf_sweep(const riscf_config *config, char **csv)
{
    return guarded(
        [&]
        {
            require(config && csv, "arguments must not be NULL");
            *csv = copy_string(riscf::run_experiment(config->spec));
        });
}

} // extern "C"
