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

#ifndef BRCVA_CONFIG_HPP
#define BRCVA_CONFIG_HPP

#include "brcva/cvaengine.hpp"
#include "brcva/errors.hpp"
#include "brcva/scenario.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace brcva {

/// Configuration error carrying the position of the offending node.
class ConfigError : public InvalidInput {
  public:
    ConfigError(const std::string& message, std::string file, int line, int column);

    const std::string& file() const { return file_; }
    const std::string& message() const { return message_; }
    int line() const { return line_; }
    int column() const { return column_; }

  private:
    std::string message_;
    std::string file_;
    int line_;
    int column_;
};

struct NameSpec {
    std::string label;
    std::optional<RiskLevel> preset;
    CirParams params;
    double lgd = 0.6;
    /// Model-only volatility override; the market curve keeps the base params.
    std::optional<double> nu;
    /// Bootstrapped market curve; CIR-implied survival of params when absent.
    std::optional<CdsQuoteCurve> quotes;
    std::string quote_file;
};

struct MarketSpec {
    std::array<NameSpec, 3> names;
};

struct ContractSpec {
    double start = 0.0;
    double maturity = 5.0;
    std::optional<double> spread_bp;
    double coupon_interval = 0.25;
};

struct SweepSpec {
    std::vector<CopulaCorrelations> correlations;
    std::vector<double> nu1;
};

struct BreakevenSpec {
    std::vector<RiskLevel> levels{RiskLevel::low, RiskLevel::middle, RiskLevel::high};
    std::vector<double> tenors{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    double lgd = 0.7;
};

struct RunConfig {
    std::string source;
    double rate = 0.03;
    ContractSpec contract;
    /// One market for cva and bootstrap, inception and valuation for mtm.
    std::vector<MarketSpec> markets;
    double elapsed = 0.0; ///< years between the two mtm markets
    SweepSpec sweep;
    BreakevenSpec breakeven;
    std::uint64_t paths = 10000;
    std::uint64_t seed = 12345;
    EngineConfig engine;
    double knot_step = 1.0 / 48.0;

    bool is_mtm() const { return markets.size() == 2; }

    /// Canonical JSON of every resolved numeric input, keys sorted.
    std::string canonical() const;
    /// FNV-1a 64 of canonical().
    std::uint64_t hash() const;
};

/// Parses YAML text. Relative quote paths resolve against base_dir.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                       const std::string& source = "<string>");
RunConfig load_config(const std::filesystem::path& path);

// Rejects empty sweep axes and correlation triples that are not positive
// semi-definite.
void validate_sweep(const RunConfig& config);

SurvivalFunction market_survival(const NameSpec& name, const DiscountCurve& discount);

/// Scenario for one sweep cell; nu1 overrides the reference volatility.
ScenarioModel build_scenario(const RunConfig& config, const MarketSpec& market, const CopulaCorrelations& corr,
                             std::optional<double> nu1);

std::uint64_t fnv1a(const std::string& text);

} // namespace brcva

#endif
