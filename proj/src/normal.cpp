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

#include "brcva/normal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

namespace brcva {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct GaussLegendre {
    std::array<double, 10> w;
    std::array<double, 10> x;
    int n;
};

constexpr GaussLegendre gl6{{0.1713244923791705, 0.3607615730481384, 0.4679139345726904},
                            {0.9324695142031522, 0.6612093864662647, 0.2386191860831970},
                            3};
constexpr GaussLegendre gl12{{0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                              0.2031674267230659, 0.2334925365383547, 0.2491470458134029},
                             {0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                              0.5873179542866171, 0.3678314989981802, 0.1252334085114692},
                             6};
constexpr GaussLegendre gl20{{0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                              0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
                              0.1316886384491766, 0.1420961093183821, 0.1491729864726037,
                              0.1527533871307259},
                             {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                              0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                              0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                              0.07652652113349733},
                             10};

// P(X > dh, Y > dk).
double bvn_upper(double dh, double dk, double r) {
    if (dh == inf || dk == inf)
        return 0.0;
    if (dh == -inf)
        return dk == -inf ? 1.0 : norm_cdf(-dk);
    if (dk == -inf)
        return norm_cdf(-dh);
    if (r == 0.0)
        return norm_cdf(-dh) * norm_cdf(-dk);

    constexpr double tp = 2.0 * std::numbers::pi;
    const GaussLegendre& g = std::abs(r) < 0.3 ? gl6 : (std::abs(r) < 0.75 ? gl12 : gl20);
    double h = dh;
    double k = dk;
    double hk = h * k;
    double bvn = 0.0;

    if (std::abs(r) < 0.925) {
        const double hs = (h * h + k * k) / 2.0;
        const double asr = std::asin(r) / 2.0;
        for (int i = 0; i < g.n; ++i) {
            for (double s : {-1.0, 1.0}) {
                const double sn = std::sin(asr * (1.0 + s * g.x[i]));
                bvn += g.w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
        }
        bvn = bvn * asr / tp + norm_cdf(-h) * norm_cdf(-k);
    } else {
        if (r < 0.0) {
            k = -k;
            hk = -hk;
        }
        if (std::abs(r) < 1.0) {
            const double as = (1.0 - r) * (1.0 + r);
            double a = std::sqrt(as);
            const double bs = (h - k) * (h - k);
            double asr = -(bs / as + hk) / 2.0;
            const double c = (4.0 - hk) / 8.0;
            const double d = (12.0 - hk) / 80.0;
            if (asr > -100.0)
                bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
            if (hk > -100.0) {
                const double b = std::sqrt(bs);
                const double sp = std::sqrt(tp) * norm_cdf(-b / a);
                bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
            }
            a /= 2.0;
            double sum = 0.0;
            for (int i = 0; i < g.n; ++i) {
                for (double s : {-1.0, 1.0}) {
                    const double xs = std::pow(a * (1.0 + s * g.x[i]), 2);
                    asr = -(bs / xs + hk) / 2.0;
                    if (asr <= -100.0)
                        continue;
                    const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
                    const double rs = std::sqrt(1.0 - xs);
                    const double ep = std::exp(-(hk / 2.0) * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
                    sum += g.w[i] * std::exp(asr) * (sp - ep);
                }
            }
            bvn = (a * sum - bvn) / tp;
        }
        if (r > 0.0) {
            bvn += norm_cdf(-std::max(h, k));
        } else if (h >= k) {
            bvn = -bvn;
        } else {
            const double l = h < 0.0 ? norm_cdf(k) - norm_cdf(h) : norm_cdf(-h) - norm_cdf(-k);
            bvn = l - bvn;
        }
    }
    return std::clamp(bvn, 0.0, 1.0);
}

} // namespace

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_quantile(double u) {
    if (u <= 0.0)
        return -inf;
    if (u >= 1.0)
        return inf;
    if (u > 0.5)
        return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - u));
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

double bivariate_normal_cdf(double h, double k, double rho) {
    rho = std::clamp(rho, -1.0, 1.0);
    return bvn_upper(-h, -k, rho);
}

} // namespace brcva
