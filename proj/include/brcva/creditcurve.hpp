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

#ifndef BRCVA_CREDITCURVE_HPP
#define BRCVA_CREDITCURVE_HPP

#include "brcva/intensity.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace brcva {

/// Deterministic discount curve: flat continuously compounded rate or a table
/// of discount factors interpolated log-linearly (flat forward beyond the last point).
class DiscountCurve {
  public:
    DiscountCurve() = default;
    static DiscountCurve flat(double rate);
    static DiscountCurve from_table(std::vector<double> times, std::vector<double> factors);

    /// D(0, t).
    double discount(double t) const;
    /// D(t1, t2) = D(0, t2) / D(0, t1).
    double discount(double t1, double t2) const;
    /// The curve seen from time `origin`: D'(0, t) = D(origin, origin + t).
    DiscountCurve shifted(double origin) const;

  private:
    double raw_log_discount(double t) const;

    double rate_ = 0.0;
    double origin_ = 0.0;
    std::vector<double> times_;
    std::vector<double> log_factors_;
};

struct CdsQuote {
    double tenor = 0.0;     ///< years
    double spread_bp = 0.0; ///< running spread, basis points per year
};

/// Quoted CDS curve of one name.
struct CdsQuoteCurve {
    std::string name;
    std::vector<CdsQuote> quotes;
    double lgd = 0.6;

    /// Throws InvalidInput unless tenors are strictly increasing and positive,
    /// spreads non-negative and LGD in (0, 1].
    void validate() const;
};

/// Parses a `tenor_years,spread_bp` CSV file (header row required).
CdsQuoteCurve read_quote_csv(const std::string& path, double lgd);
CdsQuoteCurve parse_quote_csv(const std::string& text, double lgd, const std::string& source = "<string>");

/// Piecewise-linear hazard rate: flat up to the first knot, linear between knots
/// and flat after the last one.
class SurvivalCurve {
  public:
    SurvivalCurve() = default;
    SurvivalCurve(std::vector<double> knots, std::vector<double> hazards);
    static SurvivalCurve flat(double hazard);

    std::span<const double> knots() const { return knots_; }
    std::span<const double> hazards() const { return hazards_; }

    double hazard(double t) const;
    double integrated_hazard(double t) const;
    /// Q(tau > t).
    double survival(double t) const { return std::exp(-integrated_hazard(t)); }
    SurvivalFunction as_function() const;

  private:
    std::vector<double> knots_{1.0};
    std::vector<double> hazards_{0.0};
    std::vector<double> cumulative_{0.0}; // H at each knot
};

struct BootstrapConfig {
    double coupon_interval = 0.25;
    double integration_step = 1.0 / 52.0;
    /// Required |CDS value| per unit notional at every quoted tenor.
    double tolerance = 1e-10;
};

/// Hazard knots at the quote tenors such that every quoted receiver CDS
/// (premium with accrual on default, quarterly coupons) has zero value.
/// Throws ArbitrageError when a tenor needs a negative hazard.
SurvivalCurve bootstrap_hazard(const CdsQuoteCurve& curve, const DiscountCurve& discount,
                               const BootstrapConfig& config = {});

} // namespace brcva

#endif
