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

#ifndef BRCVA_CDSPRICER_HPP
#define BRCVA_CDSPRICER_HPP

#include "brcva/creditcurve.hpp"

#include <span>
#include <vector>

namespace brcva {

enum class Direction {
    receiver, ///< protection seller: receives the spread, pays LGD on default
    payer,    ///< protection buyer
};

inline double direction_sign(Direction d) { return d == Direction::receiver ? 1.0 : -1.0; }

/// One premium period: the coupon alpha paid at pay_date accrues from accrual_start.
struct CouponPeriod {
    double accrual_start;
    double pay_date;
    double alpha;
};

/// Running-spread CDS on the reference name, protection over (t_start, t_end].
///
/// Coupon dates are generated backwards from t_end every coupon_interval
/// years. A first period that began before t_start (a seasoned contract)
/// still pays its full coupon.
struct CdsContract {
    double t_start = 0.0;
    double t_end = 5.0;
    double spread = 0.0; ///< per year, as a fraction
    double lgd = 0.6;
    double coupon_interval = 0.25;
    Direction direction = Direction::receiver;

    void validate() const;
    std::vector<CouponPeriod> periods() const;
};

/// Discretization of the premium and protection legs seen from a valuation
/// time T_j: sub-steps of at most `step` years inside each coupon period, with
/// discount and accrual weights evaluated at sub-step midpoints.
///
/// The legs are linear in the survival probabilities at times(), so the same
/// schedule prices any survival curve.
class ResidualSchedule {
  public:
    ResidualSchedule(const CdsContract& contract, double valuation_time, const DiscountCurve& discount,
                     double step = 1.0 / 52.0);

    double valuation_time() const { return valuation_time_; }
    /// Survival evaluation points: max(t_start, T_j) = s_0 < ... < s_K = t_end.
    std::span<const double> times() const { return times_; }

    struct Legs {
        double coupons = 0.0;  ///< sum alpha_i D(T_j, T_i) q(T_i)
        double accrual = 0.0;  ///< accrued premium paid on default, per unit spread
        double protection = 0.0; ///< sum D(T_j, m_k) (q_k - q_{k+1})
        double annuity() const { return coupons + accrual; }
    };
    /// q holds the survival probabilities at times().
    Legs legs(std::span<const double> q) const;
    /// Receiver value S * annuity - LGD * protection, discounted to T_j.
    double receiver_value(std::span<const double> q, double spread, double lgd) const;

  private:
    double valuation_time_;
    std::vector<double> times_;
    std::vector<double> protection_weight_; // per sub-step
    std::vector<double> accrual_weight_;    // per sub-step
    std::vector<std::size_t> coupon_index_; // index into times_ of each remaining pay date
    std::vector<double> coupon_weight_;     // alpha_i D(T_j, T_i)
};

/// Value at time 0 of the contract, in its own direction, on a survival curve.
double cds_price(const CdsContract& contract, const SurvivalFunction& survival, const DiscountCurve& discount,
                 double step = 1.0 / 52.0);

/// Spread that zeroes cds_price. Throws InvalidInput when the annuity vanishes.
double breakeven_spread(const CdsContract& contract, const SurvivalFunction& survival,
                        const DiscountCurve& discount, double step = 1.0 / 52.0);

/// Residual value at T_j, in the contract direction and discounted to T_j, when
/// the reference survival seen from T_j is cond_survival (non-increasing, at
/// most 1 at T_j).
double residual_cds_value(const CdsContract& contract, double valuation_time,
                          const SurvivalFunction& cond_survival, const DiscountCurve& discount,
                          double step = 1.0 / 52.0);

} // namespace brcva

#endif
