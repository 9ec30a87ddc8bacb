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

#include "brcva/intensity.hpp"

#include "brcva/errors.hpp"

#include <boost/random/non_central_chi_squared_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace brcva {

namespace {

using cplx = std::complex<double>;

// Power series of g_mu(x) = x + 2x e^-x - 5/2 + 2 e^-x + e^-2x / 2 and
// g_y(x) = 1 - e^-2x - 2x e^-x, used when the closed forms cancel badly.
double g_mu_series(double x) {
    double sum = 0.0;
    double fact_nm1 = 1.0; // (n-1)!
    double xn = x;         // x^n
    for (int n = 1; n <= 24; ++n) {
        const double fact_n = fact_nm1 * n;
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        double c = 2.0 * (-sgn) / fact_nm1 + 2.0 * sgn / fact_n + 0.5 * sgn * std::ldexp(1.0, n) / fact_n;
        if (n == 1)
            c += 1.0;
        sum += c * xn;
        fact_nm1 = fact_n;
        xn *= x;
    }
    return sum;
}

double g_y_series(double x) {
    double sum = 0.0;
    double fact_nm1 = 1.0;
    double xn = x;
    for (int n = 1; n <= 24; ++n) {
        const double fact_n = fact_nm1 * n;
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        sum += (-sgn * std::ldexp(1.0, n) / fact_n - 2.0 * (-sgn) / fact_nm1) * xn;
        fact_nm1 = fact_n;
        xn *= x;
    }
    return sum;
}

double g_mu(double x) {
    if (x < 0.5)
        return g_mu_series(x);
    const double e = std::exp(-x);
    return x + 2.0 * x * e - 2.5 + 2.0 * e + 0.5 * e * e;
}

double g_y(double x) {
    if (x < 0.5)
        return g_y_series(x);
    const double e = std::exp(-x);
    return 1.0 - e * e - 2.0 * x * e;
}

// log(1 + w), accurate for small |w|.
cplx complex_log1p(cplx w) {
    const double re = 0.5 * std::log1p(2.0 * w.real() + std::norm(w));
    return {re, std::atan2(w.imag(), 1.0 + w.real())};
}

// (1 - e^{-kappa h}) / kappa
double decay_integral(double kappa, double h) { return -std::expm1(-kappa * h) / kappa; }

} // namespace

void CirParams::validate() const {
    BRCVA_REQUIRE(std::isfinite(y0) && std::isfinite(kappa) && std::isfinite(mu) && std::isfinite(nu),
                  "CIR parameters must be finite");
    BRCVA_REQUIRE(kappa > 0.0, "CIR kappa must be positive, got " << kappa);
    BRCVA_REQUIRE(y0 >= 0.0, "CIR y0 must be non-negative, got " << y0);
    BRCVA_REQUIRE(mu >= 0.0, "CIR mu must be non-negative, got " << mu);
    BRCVA_REQUIRE(nu >= 0.0, "CIR nu must be non-negative, got " << nu);
}

double cir_mean(const CirParams& p, double y_start, double t) {
    return p.mu + (y_start - p.mu) * std::exp(-p.kappa * t);
}

double cir_variance(const CirParams& p, double y_start, double t) {
    const double e = std::exp(-p.kappa * t);
    const double one_minus = -std::expm1(-p.kappa * t);
    const double nu2 = p.nu * p.nu;
    return y_start * (nu2 / p.kappa) * e * one_minus + p.mu * nu2 / (2.0 * p.kappa) * one_minus * one_minus;
}

double integrated_cir_mean(const CirParams& p, double y_start, double h) {
    return p.mu * h + (y_start - p.mu) * decay_integral(p.kappa, h);
}

double integrated_cir_variance(const CirParams& p, double y_start, double h) {
    if (h <= 0.0)
        return 0.0;
    const double x = p.kappa * h;
    const double k3 = p.kappa * p.kappa * p.kappa;
    const double v = p.nu * p.nu / k3 * (p.mu * g_mu(x) + y_start * g_y(x));
    return std::max(v, 0.0);
}

CirTransform integrated_cir_transform(const CirParams& p, double h, cplx s) {
    const double kappa = p.kappa;
    if (p.deterministic()) {
        const double b0 = decay_integral(kappa, h);
        return {-s * p.mu * (h - b0), s * b0};
    }
    const double nu2 = p.nu * p.nu;
    const cplx gamma = std::sqrt(cplx(kappa * kappa, 0.0) + 2.0 * nu2 * s);
    const cplx eg = std::exp(-gamma * h);
    const cplx ratio = (gamma - kappa) / (gamma + kappa);
    const double scale = 2.0 * kappa * p.mu / nu2;
    const cplx log_a = scale * (std::log(2.0 * gamma) + (kappa - gamma) * (h / 2.0) - std::log(gamma + kappa) -
                                complex_log1p(ratio * eg));
    const cplx b = 2.0 * s * (1.0 - eg) / ((gamma + kappa) + (gamma - kappa) * eg);
    return {log_a, b};
}

double cir_survival_from(const CirParams& p, double y_start, double t) {
    if (t <= 0.0)
        return 1.0;
    const CirTransform tr = integrated_cir_transform(p, t, cplx(1.0, 0.0));
    return std::exp(tr.log_a.real() - tr.b.real() * y_start);
}

double cir_survival(const CirParams& p, double t) { return cir_survival_from(p, p.y0, t); }

StandardGrid::StandardGrid(const InversionConfig& config) : config_(config) {
    BRCVA_REQUIRE(config.period_half_width > config.tail_width && config.tail_width > 0.0,
                  "inversion needs 0 < tail_width < period_half_width");
    BRCVA_REQUIRE(config.grid_spacing > 0.0, "grid spacing must be positive");
    BRCVA_REQUIRE(config.max_terms >= 2, "at least two Fourier terms are required");
    eta_ = std::numbers::pi / config.period_half_width;
    const int half = static_cast<int>(std::ceil(config.tail_width / config.grid_spacing - 1e-9));
    const double step = config.tail_width / half;
    for (int m = -half; m <= half; ++m)
        points_.push_back(m * step);
    const std::size_t n = points_.size();
    cos_.resize(static_cast<std::size_t>(config.max_terms) * n);
    sin_.resize(cos_.size());
    for (int j = 1; j <= config.max_terms; ++j) {
        for (std::size_t m = 0; m < n; ++m) {
            const double arg = eta_ * j * points_[m];
            cos_[(j - 1) * n + m] = std::cos(arg);
            sin_[(j - 1) * n + m] = std::sin(arg);
        }
    }
}

IntegratedCirLaw::IntegratedCirLaw(const CirParams& p, double y_start, double horizon,
                                   const InversionConfig& config)
    : config_(config) {
    BRCVA_REQUIRE(horizon >= 0.0, "integration horizon must be non-negative");
    BRCVA_REQUIRE(y_start >= 0.0, "starting intensity must be non-negative");
    eta_ = std::numbers::pi / config.period_half_width;
    mean_ = integrated_cir_mean(p, y_start, horizon);
    stddev_ = std::sqrt(integrated_cir_variance(p, y_start, horizon));
    degenerate_ = p.deterministic() || horizon <= 0.0 || stddev_ <= 1e-13 * std::max(mean_, 1e-300);
    if (degenerate_)
        return;

    std::vector<cplx> phi;
    phi.reserve(config.max_terms);
    int n_terms = config.max_terms;
    for (int j = 1; j <= config.max_terms; ++j) {
        const double omega = eta_ * j;
        const double u = omega / stddev_;
        const CirTransform tr = integrated_cir_transform(p, horizon, cplx(0.0, -u));
        const cplx value = std::exp(tr.log_a - tr.b * y_start - cplx(0.0, omega * mean_ / stddev_));
        if (std::abs(value) < config.cf_tolerance) {
            n_terms = j;
            break;
        }
        phi.push_back(value);
    }
    smoothed_ = static_cast<int>(phi.size()) == config.max_terms;
    if (smoothed_) {
        if (std::abs(phi.back()) > config.cf_failure)
            throw NumericalFailure("integrated CIR characteristic function decays too slowly for inversion");
        n_terms = config.max_terms;
        phi.pop_back();
    }
    coeff_.resize(phi.size());
    for (std::size_t k = 0; k < phi.size(); ++k) {
        const int j = static_cast<int>(k) + 1;
        double weight = 1.0;
        if (smoothed_) {
            const double x = static_cast<double>(j) / n_terms;
            weight = (1.0 - x) * std::cos(std::numbers::pi * x) + std::sin(std::numbers::pi * x) / std::numbers::pi;
        }
        coeff_[k] = weight * phi[k] / (std::numbers::pi * j);
    }
}

double IntegratedCirLaw::standardized_cdf(double z) const {
    if (z <= -config_.tail_width)
        return 0.0;
    if (z >= config_.tail_width)
        return 1.0;
    double f = 0.5 + eta_ * z / (2.0 * std::numbers::pi);
    for (std::size_t k = 0; k < coeff_.size(); ++k) {
        const double arg = eta_ * static_cast<double>(k + 1) * z;
        f -= coeff_[k].imag() * std::cos(arg) - coeff_[k].real() * std::sin(arg);
    }
    return std::clamp(f, 0.0, 1.0);
}

double IntegratedCirLaw::cdf(double x) const {
    if (x < 0.0)
        return 0.0;
    if (degenerate_)
        return x >= mean_ ? 1.0 : 0.0;
    return standardized_cdf((x - mean_) / stddev_);
}

void IntegratedCirLaw::cdf_on_grid(const StandardGrid& grid, std::span<double> out) const {
    const std::span<const double> z = grid.points();
    BRCVA_REQUIRE(out.size() == z.size(), "output span does not match the grid size");
    const std::size_t n = z.size();
    if (degenerate_) {
        for (std::size_t m = 0; m < n; ++m)
            out[m] = z[m] >= 0.0 ? 1.0 : 0.0;
        return;
    }
    BRCVA_REQUIRE(grid.config().period_half_width == config_.period_half_width &&
                      static_cast<int>(coeff_.size()) < grid.config().max_terms,
                  "standard grid was built with a different inversion configuration");
    const double eta = grid.frequency_step();
    for (std::size_t m = 0; m < n; ++m)
        out[m] = 0.5 + eta * z[m] / (2.0 * std::numbers::pi);
    for (std::size_t k = 0; k < coeff_.size(); ++k) {
        const double* c = grid.cos_row(static_cast<int>(k) + 1);
        const double* s = grid.sin_row(static_cast<int>(k) + 1);
        const double ai = coeff_[k].imag();
        const double ar = coeff_[k].real();
        for (std::size_t m = 0; m < n; ++m)
            out[m] -= ai * c[m] - ar * s[m];
    }
    double running = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        double v = std::clamp(out[m], 0.0, 1.0);
        if (mean_ + stddev_ * z[m] < 0.0)
            v = 0.0;
        running = std::max(running, v);
        out[m] = running;
    }
}

double integrated_cir_cdf(const CirParams& p, double horizon, double x, const InversionConfig& config) {
    return IntegratedCirLaw(p, p.y0, horizon, config).cdf(x);
}

ShiftedIntensityModel::ShiftedIntensityModel(const CirParams& p) : params_(p) { p.validate(); }

ShiftedIntensityModel::ShiftedIntensityModel(const CirParams& p, std::vector<double> knots,
                                             std::vector<double> shift)
    : params_(p), knots_(std::move(knots)), shift_(std::move(shift)) {
    p.validate();
    BRCVA_REQUIRE(!knots_.empty() && knots_.size() == shift_.size(), "shift knots and values must match");
    BRCVA_REQUIRE(knots_.front() == 0.0 && shift_.front() == 0.0, "the integrated shift must start at Psi(0) = 0");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        BRCVA_REQUIRE(knots_[i] > knots_[i - 1], "shift knots must be strictly increasing");
        BRCVA_REQUIRE(std::isfinite(shift_[i]), "integrated shift must be finite");
        if (shift_[i] - shift_[i - 1] < -1e-12)
            negative_shift_ = true;
    }
}

double ShiftedIntensityModel::integrated_shift(double t) const {
    if (knots_.size() == 1 || t <= 0.0)
        return 0.0;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    i = std::clamp<std::size_t>(i, 1, knots_.size() - 1);
    const double w = (t - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
    return shift_[i - 1] + w * (shift_[i] - shift_[i - 1]);
}

double ShiftedIntensityModel::survival(double t) const {
    if (t <= 0.0)
        return 1.0;
    return cir_survival(params_, t) * std::exp(-integrated_shift(t));
}

ShiftedIntensityModel calibrate_shift(const CirParams& p, const SurvivalFunction& market_survival,
                                      std::span<const double> knots) {
    p.validate();
    BRCVA_REQUIRE(!knots.empty() && knots.front() == 0.0, "shift knots must start at 0");
    std::vector<double> shift(knots.size(), 0.0);
    for (std::size_t i = 1; i < knots.size(); ++i) {
        const double q = market_survival(knots[i]);
        BRCVA_REQUIRE(q > 0.0 && q <= 1.0 + 1e-12, "market survival must lie in (0, 1], got " << q << " at t = "
                                                                                            << knots[i]);
        shift[i] = std::log(cir_survival(p, knots[i]) / q);
    }
    return ShiftedIntensityModel(p, std::vector<double>(knots.begin(), knots.end()), std::move(shift));
}

ShiftedIntensityModel calibrate_shift(const CirParams& p, const SurvivalFunction& market_survival, double horizon,
                                      double step) {
    const std::vector<double> knots = uniform_grid(horizon, step);
    return calibrate_shift(p, market_survival, knots);
}

std::vector<double> uniform_grid(double horizon, double step) {
    BRCVA_REQUIRE(horizon > 0.0 && step > 0.0, "grid horizon and step must be positive");
    const auto n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        grid[i] = horizon * static_cast<double>(i) / static_cast<double>(n);
    grid[n] = horizon;
    return grid;
}

namespace {

double interpolate(std::span<const double> grid, std::span<const double> values, double t) {
    if (t <= grid.front())
        return values.front();
    if (t >= grid.back())
        return values.back();
    auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - grid.begin());
    const double w = (t - grid[i - 1]) / (grid[i] - grid[i - 1]);
    return values[i - 1] + w * (values[i] - values[i - 1]);
}

double sample_chi_squared(double dof, RandomEngine& rng) {
    std::gamma_distribution<double> g(dof / 2.0, 2.0);
    return g(rng);
}

} // namespace

double IntensityPath::level_at(double t) const { return interpolate(grid, y, t); }

double IntensityPath::cumulative_at(double t) const { return interpolate(grid, cumulative, t); }

double sample_cir_transition(const CirParams& p, double y_prev, double dt, RandomEngine& rng) {
    if (p.deterministic())
        return cir_mean(p, y_prev, dt);
    const double nu2 = p.nu * p.nu;
    const double c = nu2 * (-std::expm1(-p.kappa * dt)) / (4.0 * p.kappa);
    const double dof = p.degrees_of_freedom();
    const double lambda = y_prev * std::exp(-p.kappa * dt) / c;
    double x;
    if (lambda <= 0.0) {
        x = dof > 0.0 ? sample_chi_squared(dof, rng) : 0.0;
    } else if (dof <= 0.0) {
        std::poisson_distribution<long long> pois(lambda / 2.0);
        const long long k = pois(rng);
        x = k > 0 ? sample_chi_squared(2.0 * static_cast<double>(k), rng) : 0.0;
    } else if (dof <= 1.0 && lambda > 1e8) {
        // Poisson mixture would overflow; the law is Gaussian to high accuracy here.
        std::normal_distribution<double> n(dof + lambda, std::sqrt(2.0 * (dof + 2.0 * lambda)));
        x = std::max(n(rng), 0.0);
    } else {
        boost::random::non_central_chi_squared_distribution<double> ncx(dof, lambda);
        x = ncx(rng);
    }
    return c * x;
}

IntensityPath simulate_cir_path(const CirParams& p, std::span<const double> grid, RandomEngine& rng) {
    BRCVA_REQUIRE(!grid.empty() && grid.front() == 0.0, "simulation grid must start at 0");
    IntensityPath path;
    path.grid.assign(grid.begin(), grid.end());
    const std::size_t n = grid.size();
    path.y.resize(n);
    path.integrated.resize(n);
    path.y[0] = p.y0;
    path.integrated[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double dt = grid[i] - grid[i - 1];
        path.y[i] = sample_cir_transition(p, path.y[i - 1], dt, rng);
        path.integrated[i] = path.integrated[i - 1] + 0.5 * (path.y[i - 1] + path.y[i]) * dt;
    }
    path.cumulative = path.integrated;
    return path;
}

IntensityPath simulate_intensity_path(const ShiftedIntensityModel& m, std::span<const double> grid,
                                      RandomEngine& rng) {
    IntensityPath path = simulate_cir_path(m.params(), grid, rng);
    for (std::size_t i = 0; i < grid.size(); ++i)
        path.cumulative[i] += m.integrated_shift(grid[i]);
    return path;
}

} // namespace brcva
