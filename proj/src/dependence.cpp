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

#include "brcva/dependence.hpp"

#include "brcva/errors.hpp"
#include "brcva/normal.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace brcva {

namespace {

constexpr double degenerate_sd = 1e-12;

// (x_a - r x_c) / sqrt(1 - r^2) with its degenerate flag.
struct Standardized {
    double h;
    double sd;
    bool degenerate;
};

Standardized standardize(double xa, double r, double xc) {
    const double sd = std::sqrt(std::max(0.0, (1.0 - r) * (1.0 + r)));
    // r = 0 with an infinite x_c must not produce 0 * inf.
    const double diff = r == 0.0 ? xa : xa - r * xc;
    if (sd < degenerate_sd)
        return {diff, sd, true};
    return {diff / sd, sd, false};
}

// Indicator of {x_a - r x_c >= 0} treated as a limit of Phi(h / sd).
double degenerate_cdf(double diff) { return diff >= 0.0 ? 1.0 : 0.0; }

} // namespace

double CopulaCorrelations::between(int a, int b) const {
    if (a == b)
        return 1.0;
    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    if (lo == 0 && hi == 1)
        return r01;
    if (lo == 0 && hi == 2)
        return r02;
    if (lo == 1 && hi == 2)
        return r12;
    throw InvalidInput("copula name index out of range");
}

double min_principal_minor(const CopulaCorrelations& r) {
    const double m2a = 1.0 - r.r01 * r.r01;
    const double m2b = 1.0 - r.r02 * r.r02;
    const double m2c = 1.0 - r.r12 * r.r12;
    const double det = 1.0 + 2.0 * r.r01 * r.r02 * r.r12 - r.r01 * r.r01 - r.r02 * r.r02 - r.r12 * r.r12;
    return std::min({m2a, m2b, m2c, det});
}

GaussianCopula::GaussianCopula(const CopulaCorrelations& r) : r_(r) {
    for (double v : {r.r01, r.r02, r.r12})
        BRCVA_REQUIRE(std::isfinite(v) && v >= -1.0 && v <= 1.0, "correlation " << v << " outside [-1, 1]");
    BRCVA_REQUIRE(min_principal_minor(r) >= -1e-12, "correlation matrix (" << r.r01 << ", " << r.r02 << ", "
                                                                           << r.r12
                                                                           << ") is not positive semidefinite");
    constexpr double pivot_tol = 1e-12;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = r_.between(i, j);
            for (int k = 0; k < j; ++k)
                s -= chol_[i][k] * chol_[j][k];
            if (i == j) {
                chol_[i][i] = s > pivot_tol ? std::sqrt(s) : 0.0;
            } else if (chol_[j][j] > 0.0) {
                chol_[i][j] = s / chol_[j][j];
            } else {
                BRCVA_REQUIRE(std::abs(s) < 1e-6, "correlation matrix is not positive semidefinite");
                chol_[i][j] = 0.0;
            }
        }
    }
}

CopulaDraw GaussianCopula::sample(RandomEngine& rng) const {
    std::normal_distribution<double> normal;
    std::array<double, 3> n{};
    for (double& v : n)
        v = normal(rng);
    CopulaDraw d;
    for (int i = 0; i < 3; ++i) {
        double z = 0.0;
        for (int k = 0; k <= i; ++k)
            z += chol_[i][k] * n[k];
        d.z[i] = z;
        d.u[i] = norm_cdf(z);
        d.xi[i] = -std::log(norm_cdf(-z));
    }
    return d;
}

double GaussianCopula::conditional_cdf(int a, double ua, int c, double uc) const {
    if (ua <= 0.0)
        return 0.0;
    if (ua >= 1.0)
        return 1.0;
    const Standardized s = standardize(norm_quantile(ua), correlation(a, c), norm_quantile(uc));
    return s.degenerate ? degenerate_cdf(s.h) : norm_cdf(s.h);
}

double GaussianCopula::conditional_cdf(int a, double ua, int b, double ub, int c, double uc) const {
    if (ua <= 0.0 || ub <= 0.0)
        return 0.0;
    if (ua >= 1.0)
        return conditional_cdf(b, ub, c, uc);
    if (ub >= 1.0)
        return conditional_cdf(a, ua, c, uc);
    const double xc = norm_quantile(uc);
    const double rac = correlation(a, c);
    const double rbc = correlation(b, c);
    const Standardized sa = standardize(norm_quantile(ua), rac, xc);
    const Standardized sb = standardize(norm_quantile(ub), rbc, xc);
    if (sa.degenerate && sb.degenerate)
        return degenerate_cdf(sa.h) * degenerate_cdf(sb.h);
    if (sa.degenerate)
        return degenerate_cdf(sa.h) * norm_cdf(sb.h);
    if (sb.degenerate)
        return degenerate_cdf(sb.h) * norm_cdf(sa.h);
    const double rho = std::clamp((correlation(a, b) - rac * rbc) / (sa.sd * sb.sd), -1.0, 1.0);
    return bivariate_normal_cdf(sa.h, sb.h, rho);
}

double GaussianCopula::cdf(double u0, double u1, double u2) const {
    if (u0 <= 0.0 || u1 <= 0.0 || u2 <= 0.0)
        return 0.0;
    const double x2 = norm_quantile(u2);
    const double lower = -40.0;
    if (x2 <= lower)
        return 0.0;
    auto integrand = [&](double t) { return norm_pdf(t) * conditional_cdf(0, u0, 1, u1, 2, norm_cdf(t)); };
    const double upper = std::min(x2, 40.0);
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, lower, upper, 15, 1e-13);
}

ConditionalReferenceLaw::ConditionalReferenceLaw(const GaussianCopula& copula, int first, double u_first,
                                                 double bar_other, double bar_reference)
    : copula_(&copula), first_(first), other_(2 - first), u_first_(u_first), bar_other_(bar_other),
      bar_ref_(bar_reference) {
    BRCVA_REQUIRE(first == investor || first == counterparty, "first-to-default name must be 0 or 2");
    BRCVA_REQUIRE(u_first > 0.0 && u_first < 1.0, "trigger of the defaulted name must lie in (0, 1)");
    BRCVA_REQUIRE(bar_other >= 0.0 && bar_other < 1.0 && bar_reference >= 0.0 && bar_reference < 1.0,
                  "survival thresholds must lie in [0, 1)");
    const double a_bar = copula.conditional_cdf(reference, bar_ref_, first_, u_first_);
    const double b_bar = copula.conditional_cdf(other_, bar_other_, reference, bar_ref_, first_, u_first_);
    const double o_bar = copula.conditional_cdf(other_, bar_other_, first_, u_first_);
    const_part_ = b_bar - a_bar;
    den_ = 1.0 - o_bar + const_part_;
    if (!(den_ > 0.0))
        throw DegenerateConditioning("conditioning event of the reference name has zero probability");
}

double ConditionalReferenceLaw::cdf(double u) const {
    if (u <= bar_ref_)
        return 0.0;
    if (u >= 1.0)
        return 1.0;
    const double a = copula_->conditional_cdf(reference, u, first_, u_first_);
    const double b = copula_->conditional_cdf(other_, bar_other_, reference, u, first_, u_first_);
    return std::clamp((a - b + const_part_) / den_, 0.0, 1.0);
}

double ConditionalReferenceLaw::survival_beyond(double e) const {
    if (e <= 0.0)
        return 1.0;
    return 1.0 - cdf(1.0 - (1.0 - bar_ref_) * std::exp(-e));
}

ConditionalSurvivalTable::ConditionalSurvivalTable(const ConditionalReferenceLaw& law, double spacing)
    : bar_ref_(law.bar_reference()), spacing_(spacing) {
    BRCVA_REQUIRE(spacing > 0.0 && spacing < 1.0, "table spacing must lie in (0, 1)");
    nodes_.push_back(bar_ref_);
    values_.push_back(0.0);
    for (auto k = static_cast<long>(std::floor(bar_ref_ / spacing)) + 1;; ++k) {
        const double u = static_cast<double>(k) * spacing;
        if (u >= 1.0 - 1e-12)
            break;
        if (u <= bar_ref_)
            continue;
        nodes_.push_back(u);
        values_.push_back(std::max(values_.back(), law.cdf(u)));
    }
    nodes_.push_back(1.0);
    values_.push_back(1.0);
}

double ConditionalSurvivalTable::cdf(double u) const {
    if (u <= bar_ref_)
        return 0.0;
    if (u >= 1.0)
        return 1.0;
    const std::size_t last = nodes_.size() - 2;
    std::size_t i = 0;
    if (nodes_.size() > 2 && u >= nodes_[1]) {
        const double offset = std::floor((u - nodes_[1]) / spacing_);
        i = std::min(last, static_cast<std::size_t>(offset) + 1);
        while (i > 0 && nodes_[i] > u)
            --i;
        while (i < last && nodes_[i + 1] <= u)
            ++i;
    }
    const double w = (u - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

double ConditionalSurvivalTable::survival_beyond(double e) const {
    if (e <= 0.0)
        return 1.0;
    return 1.0 - cdf(1.0 - (1.0 - bar_ref_) * std::exp(-e));
}

} // namespace brcva
