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

#ifndef BRCVA_SCENARIO_HPP
#define BRCVA_SCENARIO_HPP

#include "brcva/cvaengine.hpp"

#include <optional>
#include <string>

namespace brcva {

/// Named credit risk levels with their CIR parameters (level and volatility
/// taken from the same row) and LGDs.
enum class RiskLevel { low, middle, high };

RiskLevel parse_risk_level(const std::string& name);
std::string to_string(RiskLevel level);
CirParams preset_params(RiskLevel level);
double preset_lgd(RiskLevel level);

/// A name whose market curve is the survival implied by a preset, possibly
/// driven by a CIR process with a different volatility (the shift absorbs the
/// difference).
struct PresetName {
    RiskLevel level = RiskLevel::middle;
    std::optional<double> nu;   ///< overrides the preset volatility
    std::optional<double> lgd;  ///< overrides the preset LGD
};

/// The survival implied by the preset CIR parameters.
SurvivalFunction preset_market_survival(RiskLevel level);

/// Shifted model of a preset name calibrated on [0, horizon].
ShiftedIntensityModel preset_model(const PresetName& name, double horizon, double knot_step = 1.0 / 48.0);

/// Five named configurations of (investor, reference, counterparty) levels.
struct ScenarioLevels {
    RiskLevel investor;
    RiskLevel reference;
    RiskLevel counterparty;
};
ScenarioLevels scenario_levels(const std::string& name);

/// Builds a preset scenario. The contract spread defaults to the break-even
/// spread of the reference market curve at the contract maturity.
ScenarioModel preset_scenario(const std::array<PresetName, 3>& names, const CopulaCorrelations& correlations,
                              double maturity = 5.0, std::optional<double> spread = std::nullopt,
                              double rate = 0.03, double premium_step = 1.0 / 52.0);

} // namespace brcva

#endif
