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

#include "brcva/cdspricer.hpp"

#include "brcva/errors.hpp"

#include <algorithm>
#include <cmath>

namespace brcva {

namespace {
constexpr double time_eps = 1e-9;
}

void CdsContract::validate() const {
    BRCVA_REQUIRE(std::isfinite(t_start) && std::isfinite(t_end) && t_start >= 0.0 && t_end > t_start,
                  "CDS needs 0 <= t_start < t_end, got [" << t_start << ", " << t_end << "]");
    BRCVA_REQUIRE(std::isfinite(spread) && spread >= 0.0, "CDS spread must be non-negative");
    BRCVA_REQUIRE(lgd >= 0.0 && lgd <= 1.0, "reference LGD must lie in [0, 1]");
    BRCVA_REQUIRE(coupon_interval > 0.0, "coupon interval must be positive");
}

std::vector<CouponPeriod> CdsContract::periods() const {
    validate();
    std::vector<CouponPeriod> out;
    for (int k = 0;; ++k) {
        const double pay = t_end - k * coupon_interval;
        if (pay <= t_start + time_eps)
            break;
        double start = pay - coupon_interval;
        if (std::abs(start - t_start) < time_eps)
            start = t_start;
        out.push_back({start, pay, pay - start});
    }
    std::reverse(out.begin(), out.end());
    return out;
}

ResidualSchedule::ResidualSchedule(const CdsContract& contract, double valuation_time,
                                   const DiscountCurve& discount, double step)
    : valuation_time_(valuation_time) {
    BRCVA_REQUIRE(step > 0.0, "integration step must be positive");
    BRCVA_REQUIRE(valuation_time >= 0.0 && valuation_time < contract.t_end,
                  "valuation time " << valuation_time << " outside [0, " << contract.t_end << ")");
    const double s0 = std::max(contract.t_start, valuation_time);
    times_.push_back(s0);
    for (const CouponPeriod& p : contract.periods()) {
        if (p.pay_date <= s0 + time_eps)
            continue;
        const double from = std::max(p.accrual_start, s0);
        const auto n = static_cast<int>(std::max(1.0, std::ceil((p.pay_date - from) / step - time_eps)));
        for (int i = 1; i <= n; ++i) {
            const double left = times_.back();
            const double right = i == n ? p.pay_date : from + (p.pay_date - from) * i / n;
            const double mid = 0.5 * (left + right);
            const double df = discount.discount(valuation_time, mid);
            protection_weight_.push_back(df);
            accrual_weight_.push_back(df * (mid - p.accrual_start));
            times_.push_back(right);
        }
        coupon_index_.push_back(times_.size() - 1);
        coupon_weight_.push_back(p.alpha * discount.discount(valuation_time, p.pay_date));
    }
}

ResidualSchedule::Legs ResidualSchedule::legs(std::span<const double> q) const {
    BRCVA_REQUIRE(q.size() == times_.size(), "survival vector does not match the schedule");
    Legs l;
    for (std::size_t i = 0; i < coupon_index_.size(); ++i)
        l.coupons += coupon_weight_[i] * q[coupon_index_[i]];
    for (std::size_t k = 0; k + 1 < q.size(); ++k) {
        const double dq = q[k] - q[k + 1];
        l.protection += protection_weight_[k] * dq;
        l.accrual += accrual_weight_[k] * dq;
    }
    return l;
}

double ResidualSchedule::receiver_value(std::span<const double> q, double spread, double lgd) const {
    const Legs l = legs(q);
    return spread * l.annuity() - lgd * l.protection;
}

namespace {

std::vector<double> sample_survival(const ResidualSchedule& schedule, const SurvivalFunction& survival) {
    std::vector<double> q;
    q.reserve(schedule.times().size());
    for (double t : schedule.times())
        q.push_back(survival(t));
    return q;
}

} // namespace

double cds_price(const CdsContract& contract, const SurvivalFunction& survival, const DiscountCurve& discount,
                 double step) {
    const ResidualSchedule schedule(contract, 0.0, discount, step);
    const std::vector<double> q = sample_survival(schedule, survival);
    return direction_sign(contract.direction) * schedule.receiver_value(q, contract.spread, contract.lgd);
}

double breakeven_spread(const CdsContract& contract, const SurvivalFunction& survival,
                        const DiscountCurve& discount, double step) {
    const ResidualSchedule schedule(contract, 0.0, discount, step);
    const std::vector<double> q = sample_survival(schedule, survival);
    const ResidualSchedule::Legs l = schedule.legs(q);
    BRCVA_REQUIRE(l.annuity() > 0.0, "premium annuity is zero; break-even spread undefined");
    return contract.lgd * l.protection / l.annuity();
}

double residual_cds_value(const CdsContract& contract, double valuation_time,
                          const SurvivalFunction& cond_survival, const DiscountCurve& discount, double step) {
    const ResidualSchedule schedule(contract, valuation_time, discount, step);
    const std::vector<double> q = sample_survival(schedule, cond_survival);
    BRCVA_REQUIRE(q.front() <= 1.0 + 1e-12, "conditional survival exceeds 1 at the valuation time");
    for (std::size_t k = 1; k < q.size(); ++k)
        BRCVA_REQUIRE(q[k] <= q[k - 1] + 1e-12 && q[k] >= 0.0,
                      "conditional survival is not non-increasing at t = " << schedule.times()[k]);
    return direction_sign(contract.direction) * schedule.receiver_value(q, contract.spread, contract.lgd);
}

} // namespace brcva
