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

#include "brcva/runner.hpp"

#include "brcva/errors.hpp"
#include "brcva/random.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace brcva {

std::string format_number(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    // Avoid a signed zero in the output.
    if (std::string_view(buf) == "-0.000000")
        return "0.000000";
    return buf;
}

void ResultTable::write_csv(std::ostream& os) const {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016" PRIx64, config_hash);
    os << "# " << engine_version << "\n";
    os << "# command " << command << "\n";
    os << "# seed " << seed << "\n";
    os << "# n_paths " << n_paths << "\n";
    os << "# config_hash " << hash << "\n";
    for (const auto& f : failures)
        os << "# failed " << f << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << row[i];
        os << "\n";
    }
}

std::string ResultTable::csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
}

namespace {

ResultTable make_table(const RunConfig& config, std::string command, std::uint64_t n_paths, std::uint64_t seed) {
    ResultTable t;
    t.command = std::move(command);
    t.n_paths = n_paths;
    t.seed = seed;
    RunConfig effective = config;
    effective.paths = n_paths;
    effective.seed = seed;
    t.config_hash = effective.hash();
    return t;
}

std::vector<std::string> cell_prefix(const CopulaCorrelations& c, double nu1) {
    return {format_number(c.r01), format_number(c.r02), format_number(c.r12), format_number(nu1)};
}

void require_markets(const RunConfig& config, std::size_t n, const char* command) {
    if (config.markets.size() != n)
        throw ConfigError(std::string(command) + " requires " +
                              (n == 1 ? "names (or scenario)" : "an mtm block with inception and valuation"),
                          config.source, 0, 0);
}

} // namespace

ResultTable run_breakeven(const RunConfig& config) {
    ResultTable t = make_table(config, "breakeven", 0, 0);
    t.columns = {"level", "tenor_years", "spread_bp"};
    const DiscountCurve disc = DiscountCurve::flat(config.rate);
    for (RiskLevel level : config.breakeven.levels) {
        const SurvivalFunction s = preset_market_survival(level);
        for (double tenor : config.breakeven.tenors) {
            std::string value;
            try {
                CdsContract c;
                c.t_end = tenor;
                c.lgd = config.breakeven.lgd;
                c.coupon_interval = config.contract.coupon_interval;
                value = format_number(breakeven_spread(c, s, disc, config.engine.premium_step) * 1e4);
            } catch (const Error& e) {
                t.failures.push_back(to_string(level) + " " + format_number(tenor) + ": " + e.what());
                value = "nan";
            }
            t.rows.push_back({to_string(level), format_number(tenor), value});
        }
    }
    return t;
}

ResultTable run_cva_sweep(const RunConfig& config, std::uint64_t n_paths, std::uint64_t seed) {
    require_markets(config, 1, "cva");
    validate_sweep(config);
    if (n_paths == 0)
        throw InvalidInput("n_paths must be at least 1");
    ResultTable t = make_table(config, "cva", n_paths, seed);
    t.columns = {"r01", "r02", "r12", "nu1", "payer_bp", "payer_se", "receiver_bp", "receiver_se"};
    std::uint64_t cell = 0;
    for (const auto& corr : config.sweep.correlations) {
        for (double nu1 : config.sweep.nu1) {
            std::vector<std::string> row = cell_prefix(corr, nu1);
            try {
                const ScenarioModel m = build_scenario(config, config.markets[0], corr, nu1);
                const CvaResult r = calculate_adjustment(m, n_paths, derive_seed(seed, cell), config.engine);
                for (double v : {r.payer_bp, r.payer_se, r.receiver_bp, r.receiver_se})
                    row.push_back(format_number(v));
            } catch (const Error& e) {
                t.failures.push_back("cell " + std::to_string(cell) + ": " + e.what());
                row.insert(row.end(), 4, "nan");
            }
            t.rows.push_back(std::move(row));
            ++cell;
        }
    }
    return t;
}

ResultTable run_mtm(const RunConfig& config, std::uint64_t n_paths, std::uint64_t seed) {
    require_markets(config, 2, "mtm");
    validate_sweep(config);
    if (n_paths == 0)
        throw InvalidInput("n_paths must be at least 1");
    ResultTable t = make_table(config, "mtm", n_paths, seed);
    t.columns = {"r01",         "r02",       "r12",    "nu1",       "payer_bp", "payer_se",
                 "receiver_bp", "receiver_se", "direction", "mtm_bp", "mtm_se"};
    std::uint64_t cell = 0;
    for (const auto& corr : config.sweep.correlations) {
        for (double nu1 : config.sweep.nu1) {
            const std::vector<std::string> prefix = cell_prefix(corr, nu1);
            try {
                MtmInputs in;
                in.inception = build_scenario(config, config.markets[0], corr, nu1);
                in.valuation = build_scenario(config, config.markets[1], corr, nu1);
                in.elapsed = config.elapsed;
                const auto results = mark_to_market(in, n_paths, derive_seed(seed, cell), config.engine);
                for (const auto& r : results) {
                    std::vector<std::string> row = prefix;
                    for (double v : {r.valuation.payer_bp, r.valuation.payer_se, r.valuation.receiver_bp,
                                     r.valuation.receiver_se})
                        row.push_back(format_number(v));
                    row.push_back(r.direction == Direction::payer ? "payer" : "receiver");
                    row.push_back(format_number(r.mtm_bp));
                    row.push_back(format_number(r.mtm_se));
                    t.rows.push_back(std::move(row));
                }
            } catch (const Error& e) {
                t.failures.push_back("cell " + std::to_string(cell) + ": " + e.what());
                for (const char* d : {"payer", "receiver"}) {
                    std::vector<std::string> row = prefix;
                    row.insert(row.end(), 4, "nan");
                    row.push_back(d);
                    row.insert(row.end(), 2, "nan");
                    t.rows.push_back(std::move(row));
                }
            }
            ++cell;
        }
    }
    return t;
}

ResultTable run_bootstrap(const RunConfig& config) {
    if (config.markets.empty())
        throw ConfigError("bootstrap requires names with quote files", config.source, 0, 0);
    ResultTable t = make_table(config, "bootstrap", 0, 0);
    t.columns = {"market", "name", "tenor_years", "hazard", "survival"};
    const DiscountCurve disc = DiscountCurve::flat(config.rate);
    BootstrapConfig bc;
    bc.coupon_interval = config.contract.coupon_interval;
    bc.integration_step = config.engine.premium_step;
    for (std::size_t m = 0; m < config.markets.size(); ++m) {
        const char* market = config.markets.size() == 2 ? (m == 0 ? "inception" : "valuation") : "market";
        for (const auto& n : config.markets[m].names) {
            if (!n.quotes)
                continue;
            const SurvivalCurve curve = bootstrap_hazard(*n.quotes, disc, bc);
            for (const auto& q : n.quotes->quotes) {
                t.rows.push_back({market, n.label, format_number(q.tenor), format_number(curve.hazard(q.tenor)),
                                  format_number(curve.survival(q.tenor))});
            }
        }
    }
    if (t.rows.empty())
        throw ConfigError("bootstrap requires at least one name with a quote file", config.source, 0, 0);
    return t;
}

} // namespace brcva
