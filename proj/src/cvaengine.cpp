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

#include "brcva/cvaengine.hpp"

#include "brcva/errors.hpp"

#include <algorithm>
#include <cmath>

namespace brcva {

namespace {

constexpr double time_eps = 1e-9;

double barrier(double cumulative) { return cumulative > 0.0 ? -std::expm1(-cumulative) : 0.0; }

// Candidate valuation dates of the residual CDS: the protection start and every pay date.
std::vector<double> valuation_dates(const CdsContract& contract) {
    std::vector<double> dates{contract.t_start};
    for (const CouponPeriod& p : contract.periods())
        dates.push_back(p.pay_date);
    return dates;
}

ConditionalReferenceLaw conditioning_law(const EngineContext& ctx, const DefaultDraw& draw, int first) {
    const int other = 2 - first;
    const double tau_f = draw.tau[first];
    const double bar_other = barrier(draw.paths[other].cumulative_at(tau_f));
    const double bar_ref = barrier(draw.paths[reference].cumulative_at(tau_f));
    return ConditionalReferenceLaw(ctx.copula(), first, draw.triggers.u[first], bar_other, bar_ref);
}

void enforce_non_increasing(std::vector<double>& q) {
    for (std::size_t k = 1; k < q.size(); ++k)
        q[k] = std::min(q[k], q[k - 1]);
}

} // namespace

void ScenarioModel::validate() const {
    for (double l : lgd)
        BRCVA_REQUIRE(l >= 0.0 && l <= 1.0, "LGDs must lie in [0, 1]");
    contract.validate();
    BRCVA_REQUIRE(contract.lgd == lgd[reference], "contract LGD must equal the reference LGD");
    GaussianCopula check(correlations);
    (void)check;
}

ScenarioModel ScenarioModel::swapped() const {
    ScenarioModel s = *this;
    std::swap(s.names[investor], s.names[counterparty]);
    std::swap(s.lgd[investor], s.lgd[counterparty]);
    s.correlations = correlations.swapped();
    return s;
}

char event_label(DefaultEvent e) {
    switch (e) {
    case DefaultEvent::A:
        return 'A';
    case DefaultEvent::B:
        return 'B';
    case DefaultEvent::C:
        return 'C';
    case DefaultEvent::D:
        return 'D';
    case DefaultEvent::E_or_F:
        break;
    }
    return 'E';
}

int DefaultDraw::first_defaulter(double maturity) const {
    if (tau[counterparty] < tau[investor] && tau[counterparty] < maturity)
        return counterparty;
    if (tau[investor] < tau[counterparty] && tau[investor] < maturity)
        return investor;
    return -1;
}

DefaultDraw DefaultDraw::swapped() const {
    DefaultDraw d = *this;
    std::swap(d.triggers.z[investor], d.triggers.z[counterparty]);
    std::swap(d.triggers.u[investor], d.triggers.u[counterparty]);
    std::swap(d.triggers.xi[investor], d.triggers.xi[counterparty]);
    std::swap(d.paths[investor], d.paths[counterparty]);
    std::swap(d.tau[investor], d.tau[counterparty]);
    switch (event) {
    case DefaultEvent::A:
        d.event = DefaultEvent::C;
        break;
    case DefaultEvent::B:
        d.event = DefaultEvent::D;
        break;
    case DefaultEvent::C:
        d.event = DefaultEvent::A;
        break;
    case DefaultEvent::D:
        d.event = DefaultEvent::B;
        break;
    case DefaultEvent::E_or_F:
        break;
    }
    return d;
}

EngineContext::EngineContext(const ScenarioModel& model, const EngineConfig& config)
    : model_(model), config_(config), copula_(model.correlations),
      grid_(uniform_grid(model.contract.t_end, config.simulation_step)), standard_(config.inversion),
      coupon_dates_(valuation_dates(model.contract)) {
    model.validate();
    BRCVA_REQUIRE(config.premium_step > 0.0 && config.copula_spacing > 0.0, "engine grid steps must be positive");
    schedules_.reserve(coupon_dates_.size());
    for (double t : coupon_dates_) {
        if (t < model.contract.t_end - time_eps)
            schedules_.emplace_back(model.contract, t, model.discount, config.premium_step);
    }
}

double invert_cumulative(const IntensityPath& path, double xi) {
    const std::vector<double>& lam = path.cumulative;
    if (lam.front() >= xi)
        return path.grid.front();
    for (std::size_t k = 1; k < lam.size(); ++k) {
        if (lam[k] >= xi) {
            const double w = (xi - lam[k - 1]) / (lam[k] - lam[k - 1]);
            return path.grid[k - 1] + w * (path.grid[k] - path.grid[k - 1]);
        }
    }
    return no_default;
}

DefaultDraw draw_default_times(const EngineContext& ctx, RandomEngine& rng) {
    DefaultDraw d;
    d.triggers = ctx.copula().sample(rng);
    for (int i = 0; i < 3; ++i) {
        d.paths[i] = simulate_intensity_path(ctx.model().names[i], ctx.simulation_grid(), rng);
        d.tau[i] = invert_cumulative(d.paths[i], d.triggers.xi[i]);
    }
    const double t = ctx.model().contract.t_end;
    const double t0 = d.tau[investor];
    const double t2 = d.tau[counterparty];
    if (t0 <= t2 && t0 <= t)
        d.event = t2 <= t ? DefaultEvent::A : DefaultEvent::B;
    else if (t2 < t0 && t2 <= t)
        d.event = t0 <= t ? DefaultEvent::C : DefaultEvent::D;
    else
        d.event = DefaultEvent::E_or_F;
    return d;
}

std::vector<double> conditional_ref_survival(const EngineContext& ctx, const DefaultDraw& draw, int first,
                                             std::span<const double> times) {
    const double tau_f = draw.tau[first];
    BRCVA_REQUIRE(std::isfinite(tau_f) && draw.tau[reference] > tau_f,
                  "conditional survival needs the first defaulter to precede the reference name");
    const ConditionalReferenceLaw law = conditioning_law(ctx, draw, first);
    const ConditionalSurvivalTable table(law, ctx.config().copula_spacing);
    const ShiftedIntensityModel& ref = ctx.model().names[reference];
    const double y_start = draw.paths[reference].level_at(tau_f);
    const double psi_f = ref.integrated_shift(tau_f);
    const StandardGrid& grid = ctx.standard_grid();
    const std::span<const double> z = grid.points();
    std::vector<double> cdf(z.size());
    std::vector<double> q(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double h = times[k] - tau_f;
        BRCVA_REQUIRE(h >= -time_eps, "survival requested before the conditioning time");
        if (h <= time_eps) {
            q[k] = 1.0;
            continue;
        }
        const double dpsi = ref.integrated_shift(times[k]) - psi_f;
        const IntegratedCirLaw y_law(ref.params(), y_start, h, ctx.config().inversion);
        if (y_law.degenerate()) {
            q[k] = table.survival_beyond(y_law.mean() + dpsi);
            continue;
        }
        y_law.cdf_on_grid(grid, cdf);
        const double m = y_law.mean();
        const double s = y_law.stddev();
        double acc = cdf.front() * table.survival_beyond(m + s * z.front() + dpsi);
        for (std::size_t j = 1; j < z.size(); ++j) {
            const double mass = cdf[j] - cdf[j - 1];
            if (mass > 0.0)
                acc += mass * table.survival_beyond(m + s * 0.5 * (z[j - 1] + z[j]) + dpsi);
        }
        acc += (1.0 - cdf.back()) * table.survival_beyond(m + s * z.back() + dpsi);
        q[k] = std::clamp(acc, 0.0, 1.0);
    }
    enforce_non_increasing(q);
    return q;
}

std::vector<double> conditional_ref_survival_reference(const EngineContext& ctx, const DefaultDraw& draw, int first,
                                                       std::span<const double> times) {
    const double tau_f = draw.tau[first];
    BRCVA_REQUIRE(std::isfinite(tau_f) && draw.tau[reference] > tau_f,
                  "conditional survival needs the first defaulter to precede the reference name");
    const ConditionalReferenceLaw law = conditioning_law(ctx, draw, first);
    const double bar = law.bar_reference();
    const double du = ctx.config().copula_spacing;
    std::vector<double> nodes{bar};
    for (auto k = static_cast<long>(std::floor(bar / du)) + 1; static_cast<double>(k) * du < 1.0 - 1e-12; ++k)
        if (static_cast<double>(k) * du > bar)
            nodes.push_back(static_cast<double>(k) * du);
    nodes.push_back(1.0);
    std::vector<double> f(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        f[i] = law.cdf(nodes[i]);

    const ShiftedIntensityModel& ref = ctx.model().names[reference];
    const double y_start = draw.paths[reference].level_at(tau_f);
    const double psi_f = ref.integrated_shift(tau_f);
    std::vector<double> q(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double h = times[k] - tau_f;
        if (h <= time_eps) {
            q[k] = 1.0;
            continue;
        }
        const double dpsi = ref.integrated_shift(times[k]) - psi_f;
        const IntegratedCirLaw y_law(ref.params(), y_start, h, ctx.config().inversion);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            const double mid = 0.5 * (nodes[i] + nodes[i + 1]);
            const double exposure = -std::log((1.0 - mid) / (1.0 - bar));
            acc += y_law.cdf(exposure - dpsi) * (f[i + 1] - f[i]);
        }
        q[k] = std::clamp(acc, 0.0, 1.0);
    }
    enforce_non_increasing(q);
    return q;
}

PathContribution adjust_at_default(const EngineContext& ctx, const DefaultDraw& draw) {
    const ScenarioModel& model = ctx.model();
    const CdsContract& contract = model.contract;
    const int first = draw.first_defaulter(contract.t_end);
    if (first < 0)
        return {};
    const double tau_f = draw.tau[first];
    if (draw.tau[reference] <= tau_f)
        return {};

    double value;
    double valuation_time;
    if (ctx.config().value_at_default) {
        valuation_time = tau_f;
        if (valuation_time >= contract.t_end - time_eps)
            return {};
        const ResidualSchedule schedule(contract, valuation_time, model.discount, ctx.config().premium_step);
        const std::vector<double> q = conditional_ref_survival(ctx, draw, first, schedule.times());
        value = schedule.receiver_value(q, contract.spread, contract.lgd);
    } else {
        const std::span<const double> dates = ctx.coupon_dates();
        const auto it = std::upper_bound(dates.begin(), dates.end(), tau_f);
        const auto index = static_cast<std::size_t>(it - dates.begin());
        if (it == dates.end() || *it >= contract.t_end - time_eps)
            return {};
        valuation_time = *it;
        const ResidualSchedule& schedule = ctx.coupon_schedule(index);
        const std::vector<double> q = conditional_ref_survival(ctx, draw, first, schedule.times());
        value = schedule.receiver_value(q, contract.spread, contract.lgd);
    }

    const double weight = model.lgd[first] * model.discount.discount(valuation_time);
    PathContribution c;
    if (first == counterparty) {
        c.receiver = weight * std::max(value, 0.0);
        c.payer = weight * std::max(-value, 0.0);
    } else {
        c.receiver = -weight * std::max(-value, 0.0);
        c.payer = -weight * std::max(value, 0.0);
    }
    return c;
}

namespace {

PathContribution run_path(const EngineContext& ctx, std::uint64_t seed, std::uint64_t index) {
    RandomEngine rng = make_stream(seed, index);
    const DefaultDraw draw = draw_default_times(ctx, rng);
    return adjust_at_default(ctx, draw);
}

PathSamples make_samples(std::uint64_t seed, std::uint64_t first_path, std::uint64_t n_paths) {
    PathSamples s;
    s.seed = seed;
    s.first_path = first_path;
    s.receiver.resize(n_paths);
    s.payer.resize(n_paths);
    return s;
}

} // namespace

PathSamples simulate_paths(const EngineContext& ctx, std::uint64_t seed, std::uint64_t first_path,
                           std::uint64_t n_paths) {
    PathSamples s = make_samples(seed, first_path, n_paths);
    const auto n = static_cast<std::int64_t>(n_paths);
    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            const PathContribution c = run_path(ctx, seed, first_path + static_cast<std::uint64_t>(i));
            s.receiver[static_cast<std::size_t>(i)] = c.receiver;
            s.payer[static_cast<std::size_t>(i)] = c.payer;
        } catch (const std::exception& e) {
#pragma omp critical(brcva_path_failure)
            {
                if (!failed) {
                    failed = true;
                    failure = "path " + std::to_string(first_path + static_cast<std::uint64_t>(i)) + ": " + e.what();
                }
            }
        }
    }
    if (failed)
        throw NumericalFailure(failure);
    return s;
}

PathSamples simulate_paths_serial(const EngineContext& ctx, std::uint64_t seed, std::uint64_t first_path,
                                  std::uint64_t n_paths) {
    PathSamples s = make_samples(seed, first_path, n_paths);
    for (std::uint64_t i = 0; i < n_paths; ++i) {
        try {
            const PathContribution c = run_path(ctx, seed, first_path + i);
            s.receiver[i] = c.receiver;
            s.payer[i] = c.payer;
        } catch (const std::exception& e) {
            throw NumericalFailure("path " + std::to_string(first_path + i) + ": " + e.what());
        }
    }
    return s;
}

namespace {

void mean_and_error(std::span<const PathSamples> parts, bool payer, double& mean, double& se) {
    std::uint64_t n = 0;
    double sum = 0.0;
    for (const PathSamples& p : parts)
        for (double x : payer ? p.payer : p.receiver) {
            sum += x;
            ++n;
        }
    mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const PathSamples& p : parts)
        for (double x : payer ? p.payer : p.receiver)
            ss += (x - mean) * (x - mean);
    se = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
}

} // namespace

CvaResult summarize(std::span<const PathSamples> parts) {
    BRCVA_REQUIRE(!parts.empty(), "nothing to summarize");
    std::uint64_t expected = parts.front().first_path;
    std::uint64_t n = 0;
    for (const PathSamples& p : parts) {
        BRCVA_REQUIRE(p.seed == parts.front().seed, "cannot merge runs with different seeds");
        BRCVA_REQUIRE(p.first_path == expected, "parts must be contiguous and in path order");
        expected += p.receiver.size();
        n += p.receiver.size();
    }
    BRCVA_REQUIRE(n > 0, "at least one path is required");
    CvaResult r;
    r.n_paths = n;
    r.seed = parts.front().seed;
    mean_and_error(parts, true, r.payer_bp, r.payer_se);
    mean_and_error(parts, false, r.receiver_bp, r.receiver_se);
    r.payer_bp *= 1e4;
    r.payer_se *= 1e4;
    r.receiver_bp *= 1e4;
    r.receiver_se *= 1e4;
    return r;
}

CvaResult calculate_adjustment(const ScenarioModel& model, std::uint64_t n_paths, std::uint64_t seed,
                               const EngineConfig& config) {
    BRCVA_REQUIRE(n_paths >= 1, "n_paths must be at least 1");
    const EngineContext ctx(model, config);
    const PathSamples samples = simulate_paths(ctx, seed, 0, n_paths);
    return summarize(std::span<const PathSamples>(&samples, 1));
}

std::array<MtmResult, 2> mark_to_market(const MtmInputs& inputs, std::uint64_t n_paths, std::uint64_t seed,
                                        const EngineConfig& config) {
    const ScenarioModel& a = inputs.inception;
    const ScenarioModel& c = inputs.valuation;
    BRCVA_REQUIRE(inputs.elapsed > 0.0, "valuation date must follow inception");
    BRCVA_REQUIRE(a.contract.spread == c.contract.spread && a.lgd == c.lgd,
                  "inception and valuation must share the spread and the LGDs");
    const double df = a.discount.discount(0.0, inputs.elapsed);

    auto risk_free = [&](const ScenarioModel& m) {
        CdsContract rc = m.contract;
        rc.direction = Direction::receiver;
        const ShiftedIntensityModel& ref = m.names[reference];
        return 1e4 * cds_price(rc, [&ref](double t) { return ref.survival(t); }, m.discount, config.premium_step);
    };
    const double rf_a = risk_free(a);
    const double rf_c = risk_free(c);
    const CvaResult cva_a = calculate_adjustment(a, n_paths, derive_seed(seed, 0), config);
    const CvaResult cva_c = calculate_adjustment(c, n_paths, derive_seed(seed, 1), config);

    std::array<MtmResult, 2> out;
    for (int k = 0; k < 2; ++k) {
        MtmResult& r = out[k];
        r.direction = k == 0 ? Direction::payer : Direction::receiver;
        const double sign = direction_sign(r.direction);
        const double adj_a = k == 0 ? cva_a.payer_bp : cva_a.receiver_bp;
        const double adj_c = k == 0 ? cva_c.payer_bp : cva_c.receiver_bp;
        const double se_a = k == 0 ? cva_a.payer_se : cva_a.receiver_se;
        const double se_c = k == 0 ? cva_c.payer_se : cva_c.receiver_se;
        r.risk_free_bp = sign * (rf_c - rf_a / df);
        r.mtm_bp = (sign * rf_c - adj_c) - (sign * rf_a - adj_a) / df;
        r.mtm_se = std::sqrt(se_c * se_c + (se_a / df) * (se_a / df));
        r.inception = cva_a;
        r.valuation = cva_c;
    }
    return out;
}

} // namespace brcva
