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

#include "brcva/creditcurve.hpp"

#include "brcva/cdspricer.hpp"
#include "brcva/errors.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace brcva {

DiscountCurve DiscountCurve::flat(double rate) {
    BRCVA_REQUIRE(std::isfinite(rate), "discount rate must be finite");
    DiscountCurve c;
    c.rate_ = rate;
    return c;
}

DiscountCurve DiscountCurve::from_table(std::vector<double> times, std::vector<double> factors) {
    BRCVA_REQUIRE(!times.empty() && times.size() == factors.size(), "discount table needs matching non-empty columns");
    DiscountCurve c;
    double prev_t = 0.0;
    double prev_df = 1.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        BRCVA_REQUIRE(times[i] > prev_t, "discount table times must be positive and strictly increasing");
        BRCVA_REQUIRE(factors[i] > 0.0 && factors[i] <= prev_df, "discount factors must be positive and non-increasing");
        prev_t = times[i];
        prev_df = factors[i];
        c.log_factors_.push_back(std::log(factors[i]));
    }
    c.times_ = std::move(times);
    return c;
}

double DiscountCurve::raw_log_discount(double t) const {
    if (t <= 0.0)
        return 0.0;
    if (times_.empty())
        return -rate_ * t;
    // Nodes are (0, 0) followed by the table; the last segment extends beyond the table.
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t i = std::min(static_cast<std::size_t>(it - times_.begin()), times_.size() - 1);
    const double t1 = times_[i];
    const double l1 = log_factors_[i];
    const double t0 = i == 0 ? 0.0 : times_[i - 1];
    const double l0 = i == 0 ? 0.0 : log_factors_[i - 1];
    return l0 + (l1 - l0) * (t - t0) / (t1 - t0);
}

double DiscountCurve::discount(double t) const {
    return std::exp(raw_log_discount(origin_ + t) - raw_log_discount(origin_));
}

double DiscountCurve::discount(double t1, double t2) const {
    BRCVA_REQUIRE(t1 <= t2, "discount(t1, t2) needs t1 <= t2");
    return std::exp(raw_log_discount(origin_ + t2) - raw_log_discount(origin_ + t1));
}

DiscountCurve DiscountCurve::shifted(double origin) const {
    BRCVA_REQUIRE(origin >= 0.0, "curve origin must be non-negative");
    DiscountCurve c = *this;
    c.origin_ += origin;
    return c;
}

void CdsQuoteCurve::validate() const {
    BRCVA_REQUIRE(!quotes.empty(), "quote curve " << name << " is empty");
    BRCVA_REQUIRE(lgd > 0.0 && lgd <= 1.0, "LGD of " << name << " must lie in (0, 1], got " << lgd);
    double prev = 0.0;
    for (const CdsQuote& q : quotes) {
        BRCVA_REQUIRE(std::isfinite(q.tenor) && q.tenor > prev,
                      "quote tenors of " << name << " must be positive and strictly increasing");
        BRCVA_REQUIRE(std::isfinite(q.spread_bp) && q.spread_bp >= 0.0, "quote spreads of " << name << " must be non-negative");
        prev = q.tenor;
    }
}

CdsQuoteCurve parse_quote_csv(const std::string& text, double lgd, const std::string& source) {
    CdsQuoteCurve curve;
    curve.name = source;
    curve.lgd = lgd;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        if (!header) {
            BRCVA_REQUIRE(line == "tenor_years,spread_bp",
                          source << ":" << line_no << ": expected header 'tenor_years,spread_bp'");
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        BRCVA_REQUIRE(comma != std::string::npos, source << ":" << line_no << ": expected two comma-separated fields");
        CdsQuote q;
        try {
            std::size_t used = 0;
            q.tenor = std::stod(line.substr(0, comma), &used);
            const std::string rest = line.substr(comma + 1);
            q.spread_bp = std::stod(rest, &used);
            BRCVA_REQUIRE(rest.find_first_not_of(" \t", used) == std::string::npos, "trailing characters");
        } catch (const InvalidInput&) {
            throw InvalidInput(source + ":" + std::to_string(line_no) + ": trailing characters after spread");
        } catch (const std::exception&) {
            throw InvalidInput(source + ":" + std::to_string(line_no) + ": malformed number");
        }
        curve.quotes.push_back(q);
    }
    BRCVA_REQUIRE(header, source << ": missing header 'tenor_years,spread_bp'");
    curve.validate();
    return curve;
}

CdsQuoteCurve read_quote_csv(const std::string& path, double lgd) {
    std::ifstream in(path);
    BRCVA_REQUIRE(in.good(), "cannot open quote file " << path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_quote_csv(buf.str(), lgd, path);
}

SurvivalCurve::SurvivalCurve(std::vector<double> knots, std::vector<double> hazards)
    : knots_(std::move(knots)), hazards_(std::move(hazards)) {
    BRCVA_REQUIRE(!knots_.empty() && knots_.size() == hazards_.size(), "hazard knots and values must match");
    double prev = 0.0;
    cumulative_.assign(knots_.size(), 0.0);
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        BRCVA_REQUIRE(knots_[i] > prev, "hazard knots must be positive and strictly increasing");
        BRCVA_REQUIRE(std::isfinite(hazards_[i]) && hazards_[i] >= 0.0, "hazard rates must be non-negative");
        if (i == 0)
            cumulative_[0] = hazards_[0] * knots_[0];
        else
            cumulative_[i] = cumulative_[i - 1] + 0.5 * (hazards_[i - 1] + hazards_[i]) * (knots_[i] - knots_[i - 1]);
        prev = knots_[i];
    }
}

SurvivalCurve SurvivalCurve::flat(double hazard) { return SurvivalCurve({1.0}, {hazard}); }

double SurvivalCurve::hazard(double t) const {
    if (t <= knots_.front())
        return hazards_.front();
    if (t >= knots_.back())
        return hazards_.back();
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    const double w = (t - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
    return hazards_[i - 1] + w * (hazards_[i] - hazards_[i - 1]);
}

double SurvivalCurve::integrated_hazard(double t) const {
    if (t <= 0.0)
        return 0.0;
    if (t <= knots_.front())
        return hazards_.front() * t;
    if (t >= knots_.back())
        return cumulative_.back() + hazards_.back() * (t - knots_.back());
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    return cumulative_[i - 1] + 0.5 * (hazards_[i - 1] + hazard(t)) * (t - knots_[i - 1]);
}

SurvivalFunction SurvivalCurve::as_function() const {
    return [curve = *this](double t) { return curve.survival(t); };
}

SurvivalCurve bootstrap_hazard(const CdsQuoteCurve& curve, const DiscountCurve& discount,
                               const BootstrapConfig& config) {
    curve.validate();
    std::vector<double> knots;
    std::vector<double> hazards;
    for (const CdsQuote& quote : curve.quotes) {
        knots.push_back(quote.tenor);
        hazards.push_back(0.0);
        CdsContract contract;
        contract.t_start = 0.0;
        contract.t_end = quote.tenor;
        contract.spread = quote.spread_bp * 1e-4;
        contract.lgd = curve.lgd;
        contract.coupon_interval = config.coupon_interval;
        const ResidualSchedule schedule(contract, 0.0, discount, config.integration_step);
        std::vector<double> q(schedule.times().size());
        auto value = [&](double h) {
            hazards.back() = h;
            const SurvivalCurve trial(knots, hazards);
            for (std::size_t k = 0; k < q.size(); ++k)
                q[k] = trial.survival(schedule.times()[k]);
            return schedule.receiver_value(q, contract.spread, contract.lgd);
        };
        const double at_zero = value(0.0);
        if (at_zero < -config.tolerance * 1e-2) {
            std::ostringstream msg;
            msg << "quotes of " << curve.name << " require a negative hazard rate at tenor " << quote.tenor << "y";
            throw ArbitrageError(msg.str(), quote.tenor);
        }
        if (at_zero <= config.tolerance) {
            hazards.back() = 0.0;
            continue;
        }
        double hi = 0.05;
        while (value(hi) > 0.0) {
            hi *= 2.0;
            if (hi > 1e3)
                throw NumericalFailure("hazard bootstrap could not bracket the " + std::to_string(quote.tenor) +
                                       "y quote of " + curve.name);
        }
        std::uintmax_t max_iter = 200;
        const auto bracket = boost::math::tools::toms748_solve(value, 0.0, hi, at_zero, value(hi),
                                                               boost::math::tools::eps_tolerance<double>(52),
                                                               max_iter);
        const double root = 0.5 * (bracket.first + bracket.second);
        const double residual = value(root);
        if (std::abs(residual) > config.tolerance)
            throw NumericalFailure("hazard bootstrap did not converge at the " + std::to_string(quote.tenor) + "y quote of " +
                                   curve.name);
        hazards.back() = root;
    }
    return SurvivalCurve(std::move(knots), std::move(hazards));
}

} // namespace brcva
