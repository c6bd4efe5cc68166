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

// Command-line front end; talks to the library only through the C interface.

#include "riscf/riscf.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace
{
    struct Failure : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    void check(riscf_status st, const char *what)
    {
        if (st != RISCF_OK)
            throw Failure(std::string(what) + ": " + riscf_status_string(st) + ": " + riscf_last_error());
    }

    struct ConfigDel { void operator()(riscf_config *p) const { riscf_config_free(p); } };
    struct ScenarioDel { void operator()(riscf_scenario *p) const { riscf_scenario_free(p); } };
    struct SolutionDel { void operator()(riscf_solution *p) const { riscf_solution_free(p); } };
    struct StringDel { void operator()(char *p) const { riscf_string_free(p); } };
    using ConfigPtr = std::unique_ptr<riscf_config, ConfigDel>;
    using ScenarioPtr = std::unique_ptr<riscf_scenario, ScenarioDel>;
    using SolutionPtr = std::unique_ptr<riscf_solution, SolutionDel>;
    using StringPtr = std::unique_ptr<char, StringDel>;

    ConfigPtr load_config(const std::string &path)
    {
        riscf_config *c = nullptr;
        if (path.empty())
            check(riscf_config_default(&c), "default configuration");
        else
            check(riscf_config_load(path.c_str(), &c), "loading configuration");
        return ConfigPtr(c);
    }

    ScenarioPtr load_scenario(const std::string &path)
    {
        riscf_scenario *s = nullptr;
        check(riscf_scenario_load(path.c_str(), &s), "loading scenario");
        return ScenarioPtr(s);
    }

    void emit(const std::string &path, const char *text)
    {
        if (path.empty() || path == "-")
        {
            std::fputs(text, stdout);
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out || !(out << text))
            throw Failure("cannot write " + path);
    }

    const char *opt_path(const std::string &s)
    {
        return s.empty() ? nullptr : s.c_str();
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"riscf: RIS-assisted cell-free massive MIMO NOMA simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", riscf_version());

    std::string config_path, scenario_path, eta_path, theta_path, output, trace_path, eta_out, theta_out;
    std::optional<std::uint64_t> seed;
    int trials = 0;
    std::string algorithm = "joint";

    auto *gen = app.add_subcommand("generate", "Draw a scenario and write it as JSON");
    gen->add_option("-c,--config", config_path, "Experiment configuration (JSON)")->check(CLI::ExistingFile);
    gen->add_option("-s,--seed", seed, "Scenario seed (overrides the configuration)");
    gen->add_option("-o,--output", output, "Scenario file to write")->required();

    auto *eval = app.add_subcommand("evaluate", "Closed-form (and optionally Monte Carlo) SE of a solution");
    eval->add_option("--scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    eval->add_option("--eta", eta_path, "Power coefficients JSON (default: equal power)")->check(CLI::ExistingFile);
    eval->add_option("--theta", theta_path, "RIS phases JSON (default: zeros)")->check(CLI::ExistingFile);
    eval->add_option("-t,--trials", trials, "Monte Carlo trials for the ergodic SE")->check(CLI::NonNegativeNumber);
    eval->add_option("-s,--seed", seed, "Monte Carlo seed");
    eval->add_option("-o,--output", output, "Report CSV (default: stdout)");

    auto *opt = app.add_subcommand("optimize", "Run successive QT, PSO or the joint optimiser");
    opt->add_option("--scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    opt->add_option("-c,--config", config_path, "Configuration with an optimizer section")
        ->check(CLI::ExistingFile);
    opt->add_option("-a,--algorithm", algorithm, "qt, pso or joint")
        ->check(CLI::IsMember({"qt", "pso", "joint"}));
    opt->add_option("--eta", eta_path, "Initial power coefficients JSON")->check(CLI::ExistingFile);
    opt->add_option("--theta", theta_path, "Initial RIS phases JSON")->check(CLI::ExistingFile);
    opt->add_option("-s,--seed", seed, "Optimiser seed");
    opt->add_option("--eta-out", eta_out, "Where to write the optimised powers")->required();
    opt->add_option("--theta-out", theta_out, "Where to write the optimised phases")->required();
    opt->add_option("--trace", trace_path, "Trace CSV (default: stdout)");

    auto *sweep = app.add_subcommand("sweep", "Run an experiment sweep and write CSV");
    sweep->add_option("-c,--config", config_path, "Experiment configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("-s,--seed", seed, "Run a single seed instead of the configured list");
    sweep->add_option("-t,--trials", trials, "Monte Carlo trials (overrides the configuration)")
        ->check(CLI::NonNegativeNumber);
    sweep->add_option("-o,--output", output, "Output CSV (default: stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }

    try
    {
        if (*gen)
        {
            ConfigPtr cfg = load_config(config_path);
            if (seed)
                check(riscf_config_set_seed(cfg.get(), *seed), "setting seed");
            riscf_scenario *s = nullptr;
            check(riscf_scenario_generate(cfg.get(), &s), "generating scenario");
            ScenarioPtr scen(s);
            check(riscf_scenario_save(scen.get(), output.c_str()), "saving scenario");
        }
        else if (*eval)
        {
            ScenarioPtr scen = load_scenario(scenario_path);
            riscf_solution *sol = nullptr;
            check(riscf_solution_load_files(scen.get(), opt_path(eta_path), opt_path(theta_path), &sol),
                  "loading solution");
            SolutionPtr solution(sol);
            char *csv = nullptr;
            double se = 0.0, erg = 0.0, err = 0.0;
            check(riscf_evaluate(scen.get(), solution.get(), trials, seed.value_or(1), &csv, &se, &erg, &err),
                  "evaluating");
            StringPtr text(csv);
            emit(output, text.get());
            std::fprintf(stderr, "sum SE (closed form): %.6f bit/s/Hz\n", se);
            if (trials > 0)
                std::fprintf(stderr, "sum SE (ergodic, %d trials): %.6f +/- %.6f bit/s/Hz\n", trials, erg, err);
        }
        else if (*opt)
        {
            ScenarioPtr scen = load_scenario(scenario_path);
            ConfigPtr cfg = config_path.empty() ? ConfigPtr() : load_config(config_path);
            SolutionPtr init;
            if (!eta_path.empty() || !theta_path.empty())
            {
                riscf_solution *sol = nullptr;
                check(riscf_solution_load_files(scen.get(), opt_path(eta_path), opt_path(theta_path), &sol),
                      "loading initial solution");
                init.reset(sol);
            }
            const riscf_algorithm algo = algorithm == "qt"    ? RISCF_ALGO_QT
                                         : algorithm == "pso" ? RISCF_ALGO_PSO
                                                              : RISCF_ALGO_JOINT;
            riscf_solution *result = nullptr;
            char *trace = nullptr;
            double se = 0.0;
            check(riscf_optimize(scen.get(), cfg.get(), algo, init.get(), seed.value_or(1), &result, &trace, &se),
                  "optimizing");
            SolutionPtr solution(result);
            StringPtr text(trace);
            check(riscf_solution_save_files(solution.get(), eta_out.c_str(), theta_out.c_str()), "saving solution");
            emit(trace_path, text.get());
            std::fprintf(stderr, "sum SE (closed form): %.6f bit/s/Hz\n", se);
        }
        else if (*sweep)
        {
            ConfigPtr cfg = load_config(config_path);
            if (seed)
                check(riscf_config_set_seed(cfg.get(), *seed), "setting seed");
            if (sweep->count("--trials") > 0)
                check(riscf_config_set_trials(cfg.get(), trials), "setting trials");
            char *csv = nullptr;
            check(riscf_sweep(cfg.get(), &csv), "running sweep");
            StringPtr text(csv);
            emit(output, text.get());
        }
    }
    catch (const Failure &e)
    {
        std::fprintf(stderr, "riscf: %s\n", e.what());
        return 1;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "riscf: %s\n", e.what());
        return 1;
    }
    return 0;
}
