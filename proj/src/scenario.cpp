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

#include "brcva/scenario.hpp"

#include "brcva/errors.hpp"

namespace brcva {

RiskLevel parse_risk_level(const std::string& name) {
    if (name == "low")
        return RiskLevel::low;
    if (name == "middle")
        return RiskLevel::middle;
    if (name == "high")
        return RiskLevel::high;
    throw InvalidInput("unknown risk level '" + name + "' (expected low, middle or high)");
}

std::string to_string(RiskLevel level) {
    switch (level) {
    case RiskLevel::low:
        return "low";
    case RiskLevel::middle:
        return "middle";
    case RiskLevel::high:
        return "high";
    }
    return "middle";
}

CirParams preset_params(RiskLevel level) {
    switch (level) {
    case RiskLevel::low:
        return {0.00001, 0.9, 0.0001, 0.01};
    case RiskLevel::middle:
        return {0.01, 0.8, 0.02, 0.2};
    case RiskLevel::high:
        return {0.03, 0.5, 0.05, 0.5};
    }
    return {};
}

double preset_lgd(RiskLevel level) {
    switch (level) {
    case RiskLevel::low:
        return 0.6;
    case RiskLevel::middle:
        return 0.65;
    case RiskLevel::high:
        return 0.7;
    }
    return 0.6;
}

SurvivalFunction preset_market_survival(RiskLevel level) {
    const CirParams p = preset_params(level);
    return [p](double t) { return cir_survival(p, t); };
}

ShiftedIntensityModel preset_model(const PresetName& name, double horizon, double knot_step) {
    CirParams p = preset_params(name.level);
    if (name.nu)
        p.nu = *name.nu;
    return calibrate_shift(p, preset_market_survival(name.level), horizon, knot_step);
}

ScenarioLevels scenario_levels(const std::string& name) {
    if (name == "base")
        return {RiskLevel::low, RiskLevel::high, RiskLevel::middle};
    if (name == "risky_counterparty")
        return {RiskLevel::low, RiskLevel::middle, RiskLevel::high};
    if (name == "risky_investor")
        return {RiskLevel::high, RiskLevel::middle, RiskLevel::low};
    if (name == "risky_reference")
        return {RiskLevel::middle, RiskLevel::high, RiskLevel::middle};
    if (name == "safe_reference")
        return {RiskLevel::high, RiskLevel::low, RiskLevel::high};
    throw InvalidInput("unknown scenario '" + name +
                       "' (expected base, risky_counterparty, risky_investor, risky_reference or safe_reference)");
}

ScenarioModel preset_scenario(const std::array<PresetName, 3>& names, const CopulaCorrelations& correlations,
                              double maturity, std::optional<double> spread, double rate, double premium_step) {
    ScenarioModel m;
    for (int i = 0; i < 3; ++i) {
        m.names[i] = preset_model(names[i], maturity);
        m.lgd[i] = names[i].lgd.value_or(preset_lgd(names[i].level));
    }
    m.correlations = correlations;
    m.discount = DiscountCurve::flat(rate);
    m.contract.t_start = 0.0;
    m.contract.t_end = maturity;
    m.contract.lgd = m.lgd[reference];
    if (spread) {
        m.contract.spread = *spread;
    } else {
        m.contract.spread = breakeven_spread(m.contract, preset_market_survival(names[reference].level), m.discount,
                                             premium_step);
    }
    m.validate();
    return m;
}

} // namespace brcva
