/*
 * Copyright 2026 The brcva Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Batch front end: break-even tables, BR-CVA sweeps, mark-to-market and
// bootstrapped curve dumps, each written as CSV.

#include "brcva/errors.hpp"
#include "brcva/runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int exit_invalid = 2;
constexpr int exit_cell_failures = 3;
constexpr int exit_numerical = 4;
constexpr std::uint64_t full_paths = 100000;

void report_error(const std::string& kind, const std::string& message, const brcva::ConfigError* where = nullptr) {
    nlohmann::json j;
    j["status"] = "error";
    j["kind"] = kind;
    if (where) {
        j["message"] = where->message();
        j["file"] = where->file();
        j["line"] = where->line();
        j["column"] = where->column();
    } else {
        j["message"] = message;
    }
    std::cerr << j.dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bilateral counterparty risk adjustment for credit default swaps"};
    app.set_version_flag("--version", brcva::engine_version);
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> paths;
    std::string out_path;
    bool full = false;

    auto add_common = [&](CLI::App* sub, bool monte_carlo) {
        sub->add_option("--config", config_path, "YAML configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "CSV output file (stdout when omitted)");
        if (monte_carlo) {
            sub->add_option("--seed", seed, "Global seed; overrides monte_carlo.seed");
            sub->add_option("--paths", paths, "Monte Carlo paths per cell; overrides monte_carlo.paths")
                ->check(CLI::PositiveNumber);
            sub->add_flag("--full", full, "Use 100000 paths per cell");
        }
    };
    CLI::App* breakeven = app.add_subcommand("breakeven", "Break-even spreads of the CIR risk presets");
    CLI::App* cva = app.add_subcommand("cva", "BR-CVA over a correlation and volatility sweep");
    CLI::App* mtm = app.add_subcommand("mtm", "Mark-to-market between an inception and a valuation market");
    CLI::App* bootstrap = app.add_subcommand("bootstrap", "Bootstrapped hazard curves of the quoted names");
    add_common(breakeven, false);
    add_common(cva, true);
    add_common(mtm, true);
    add_common(bootstrap, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("usage", e.what());
        return exit_invalid;
    }

    try {
        const brcva::RunConfig config = brcva::load_config(config_path);
        std::uint64_t n_paths = paths.value_or(config.paths);
        if (full)
            n_paths = full_paths;
        const std::uint64_t run_seed = seed.value_or(config.seed);

        brcva::ResultTable table;
        if (*breakeven)
            table = brcva::run_breakeven(config);
        else if (*cva)
            table = brcva::run_cva_sweep(config, n_paths, run_seed);
        else if (*mtm)
            table = brcva::run_mtm(config, n_paths, run_seed);
        else
            table = brcva::run_bootstrap(config);

        if (out_path.empty()) {
            table.write_csv(std::cout);
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                report_error("io", "cannot open output file '" + out_path + "'");
                return exit_invalid;
            }
            table.write_csv(out);
        }
        if (!table.failures.empty()) {
            nlohmann::json j;
            j["status"] = "partial";
            j["failed_cells"] = table.failures;
            std::cerr << j.dump() << "\n";
            return exit_cell_failures;
        }
        return 0;
    } catch (const brcva::ConfigError& e) {
        report_error("config", e.what(), &e);
        return exit_invalid;
    } catch (const brcva::InvalidInput& e) {
        report_error("invalid_input", e.what());
        return exit_invalid;
    } catch (const brcva::NumericalFailure& e) {
        report_error("numerical", e.what());
        return exit_numerical;
    } catch (const std::exception& e) {
        report_error("internal", e.what());
        return 1;
    }
}
