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
#include "brcva/creditcurve.hpp"
#include "brcva/errors.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <string>

using namespace brcva;

namespace {

const std::string data_dir = BRCVA_DATA_DIR;

double reprice(const CdsQuoteCurve& q, const SurvivalCurve& s, const DiscountCurve& d, double tenor, double spread_bp) {
    CdsContract c;
    c.t_end = tenor;
    c.spread = spread_bp * 1e-4;
    c.lgd = q.lgd;
    return cds_price(c, s.as_function(), d);
}

} // namespace

TEST_CASE("discount curves") {
    const DiscountCurve flat = DiscountCurve::flat(0.03);
    CHECK(flat.discount(2.0, 2.0) == 1.0);
    CHECK(flat.discount(0.0, 5.0) == doctest::Approx(std::exp(-0.15)).epsilon(1e-15));
    const DiscountCurve table = DiscountCurve::from_table({0.5, 1.0, 3.0, 7.0}, {0.99, 0.975, 0.92, 0.80});
    CHECK(table.discount(1.0) == doctest::Approx(0.975).epsilon(1e-15));
    for (double a : {0.2, 0.75, 2.0, 5.0})
        for (double b : {a + 0.1, a + 1.3, 9.0})
            CHECK(std::abs(table.discount(0.0, a) * table.discount(a, b) - table.discount(0.0, b)) <= 1e-12);
    CHECK(table.shifted(1.0).discount(2.0) == doctest::Approx(table.discount(1.0, 3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(DiscountCurve::from_table({1.0, 0.5}, {0.99, 0.98}), InvalidInput);
    CHECK_THROWS_AS(DiscountCurve::from_table({1.0, 2.0}, {0.99, 1.01}), InvalidInput);
}

TEST_CASE("piecewise-linear hazard survival") {
    const SurvivalCurve flat = SurvivalCurve::flat(0.02);
    CHECK(flat.survival(0.0) == 1.0);
    CHECK(flat.survival(5.0) == doctest::Approx(std::exp(-0.1)).epsilon(1e-15));

    const SurvivalCurve c({1.0, 2.0, 5.0}, {0.01, 0.03, 0.02});
    for (double t : {0.4, 1.0, 1.7, 3.3, 5.0, 8.0}) {
        const auto h = [&](double s) { return c.hazard(s); };
        double oracle = 0.0;
        double a = 0.0;
        for (double b : {1.0, 2.0, 5.0, 10.0}) {
            const double e = std::min(b, t);
            if (e > a)
                oracle += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(h, a, e, 0);
            a = b;
        }
        CHECK(c.integrated_hazard(t) == doctest::Approx(oracle).epsilon(1e-12));
    }
    CHECK(c.hazard(0.5) == 0.01);
    CHECK(c.hazard(9.0) == 0.02);
    CHECK(c.hazard(1.5) == doctest::Approx(0.02));
    CHECK_THROWS_AS(SurvivalCurve({1.0, 2.0}, {0.01, -0.01}), InvalidInput);
}

TEST_CASE("quote files") {
    const CdsQuoteCurve q = parse_quote_csv("# comment\ntenor_years,spread_bp\n\n1,10\n2, 12.5\n", 0.6, "inline");
    REQUIRE(q.quotes.size() == 2);
    CHECK(q.quotes[1].spread_bp == 12.5);
    CHECK_THROWS_WITH_AS(parse_quote_csv("tenor,spread\n1,10\n", 0.6, "f.csv"), doctest::Contains("f.csv:1"),
                         InvalidInput);
    CHECK_THROWS_WITH_AS(parse_quote_csv("tenor_years,spread_bp\n1,10\n2,abc\n", 0.6, "f.csv"),
                         doctest::Contains("f.csv:3"), InvalidInput);
    CHECK_THROWS_AS(parse_quote_csv("tenor_years,spread_bp\n2,10\n1,12\n", 0.6), InvalidInput);
    CHECK_THROWS_AS(parse_quote_csv("tenor_years,spread_bp\n1,-3\n", 0.6), InvalidInput);
    CHECK_THROWS_AS(read_quote_csv(data_dir + "/missing.csv", 0.6), InvalidInput);
}

TEST_CASE("bootstrap") {
    const DiscountCurve disc = DiscountCurve::flat(0.03);
    SUBCASE("riskless name") {
        const CdsQuoteCurve q{"zero", {{1, 0}, {3, 0}, {5, 0}}, 0.6};
        const SurvivalCurve s = bootstrap_hazard(q, disc);
        for (double h : s.hazards())
            CHECK(h == 0.0);
        CHECK(s.survival(7.0) == 1.0);
    }
    SUBCASE("credit triangle") {
        const CdsQuoteCurve q{"flat", {{5, 300}}, 0.6};
        const SurvivalCurve s = bootstrap_hazard(q, disc);
        CHECK(std::abs(s.integrated_hazard(5.0) / 5.0 - 0.05) <= 0.05 * 0.05);
    }
    SUBCASE("Shell 2006 reprices its 5y quote") {
        const CdsQuoteCurve q = read_quote_csv(data_dir + "/shell_2006.csv", 0.6);
        const SurvivalCurve s = bootstrap_hazard(q, disc);
        CdsContract c;
        c.lgd = 0.6;
        CHECK(std::abs(breakeven_spread(c, s.as_function(), disc) * 1e4 - 11.7) <= 0.01);
    }
    SUBCASE("round trip and monotonicity for every quoted curve") {
        for (const char* f : {"shell_2006", "lehman_2006", "british_airways_2006", "shell_2008", "lehman_2008",
                              "british_airways_2008"}) {
            CAPTURE(f);
            const CdsQuoteCurve q = read_quote_csv(data_dir + "/" + f + ".csv", 0.6);
            const SurvivalCurve s = bootstrap_hazard(q, disc);
            for (const auto& quote : q.quotes)
                CHECK(std::abs(reprice(q, s, disc, quote.tenor, quote.spread_bp)) <= 1e-8);
            double prev = 1.0;
            for (double t = 0.1; t <= 10.0; t += 0.1) {
                const double v = s.survival(t);
                CHECK(v <= prev);
                CHECK(v > 0.0);
                prev = v;
            }
        }
    }
    SUBCASE("inverted curve that needs a negative hazard") {
        const CdsQuoteCurve q{"inverted", {{1, 500}, {2, 10}}, 0.6};
        try {
            bootstrap_hazard(q, disc);
            FAIL("expected ArbitrageError");
        } catch (const ArbitrageError& e) {
            CHECK(e.tenor() == 2.0);
        }
    }
}
