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

#ifndef BRCVA_INTENSITY_HPP
#define BRCVA_INTENSITY_HPP

#include "brcva/random.hpp"

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace brcva {

/// Parameters of a CIR intensity dy = kappa (mu - y) dt + nu sqrt(y) dZ.
///
/// The Feller condition 2 kappa mu > nu^2 is not required; the origin may be
/// accessible. nu below `deterministic_nu` is treated as the deterministic
/// limit y' = kappa (mu - y).
struct CirParams {
    double y0 = 0.0;
    double kappa = 1.0;
    double mu = 0.0;
    double nu = 0.0;

    static constexpr double deterministic_nu = 1e-7;

    /// Throws InvalidInput unless all fields are finite, kappa > 0 and y0, mu, nu >= 0.
    void validate() const;
    bool feller() const { return 2.0 * kappa * mu > nu * nu; }
    bool deterministic() const { return nu < deterministic_nu; }
    /// Degrees of freedom of the noncentral chi-square transition law.
    double degrees_of_freedom() const { return 4.0 * kappa * mu / (nu * nu); }
};

/// E[y(t) | y(0) = y_start].
double cir_mean(const CirParams& p, double y_start, double t);
/// Var[y(t) | y(0) = y_start].
double cir_variance(const CirParams& p, double y_start, double t);
/// E[Y(h)] with Y(h) the integral of y over [0, h] started from y_start.
double integrated_cir_mean(const CirParams& p, double y_start, double h);
/// Var[Y(h)] with Y(h) the integral of y over [0, h] started from y_start.
double integrated_cir_variance(const CirParams& p, double y_start, double h);

/// E[exp(-s Y(h)) | y(0) = y_start] for complex s with Re(s) >= 0, as (log A, B)
/// with the transform equal to exp(log A - B y_start).
struct CirTransform {
    std::complex<double> log_a;
    std::complex<double> b;
};
CirTransform integrated_cir_transform(const CirParams& p, double h, std::complex<double> s);

/// P_CIR(0, t) = E[exp(-Y(t))], the CIR zero-coupon bond formula started from p.y0.
double cir_survival(const CirParams& p, double t);
/// Same as cir_survival but started from an arbitrary level.
double cir_survival_from(const CirParams& p, double y_start, double t);

/// Controls for the characteristic-function inversion of the integrated CIR law.
struct InversionConfig {
    /// Half period, in standard deviations, of the Fourier series. Mass of the
    /// standardized law outside this window aliases back into the result.
    double period_half_width = 16.0;
    /// Standardized abscissae beyond this bound are clamped to 0 or 1; this is
    /// the "mean + 12 std" upper limit of the integration range.
    double tail_width = 12.0;
    /// Largest number of Fourier terms. When the characteristic function has not
    /// decayed below `cf_tolerance` by then, a Bohman smoothing kernel is applied.
    /// Far from the Feller region the transform decays like exp(-c sqrt(w)), which
    /// is what sets this bound.
    int max_terms = 512;
    double cf_tolerance = 1e-12;
    /// Inversion fails with NumericalFailure when |phi| at the last term exceeds this.
    double cf_failure = 5e-2;
    /// Spacing of the standardized quadrature grid used by StandardGrid.
    double grid_spacing = 0.25;
};

/// Fixed standardized abscissae z_m in [-tail_width, tail_width] together with
/// the trigonometric tables the Fourier inversion needs at those points.
/// Immutable; share one instance across threads.
class StandardGrid {
  public:
    explicit StandardGrid(const InversionConfig& config = {});

    const InversionConfig& config() const { return config_; }
    std::span<const double> points() const { return points_; }
    double frequency_step() const { return eta_; }
    /// cos(eta j z_m) and sin(eta j z_m), row j-1 for j = 1..max_terms.
    const double* cos_row(int j) const { return &cos_[static_cast<std::size_t>(j - 1) * points_.size()]; }
    const double* sin_row(int j) const { return &sin_[static_cast<std::size_t>(j - 1) * points_.size()]; }

  private:
    InversionConfig config_;
    double eta_;
    std::vector<double> points_;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

/// Law of the integrated CIR process Y(h) started from y_start, with its
/// distribution function recovered from the closed-form characteristic function.
///
/// The variable is standardized with its exact mean and variance and the CDF is
/// the Gil-Pelaez integral discretized as a Fourier series (Bohman's scheme).
class IntegratedCirLaw {
  public:
    IntegratedCirLaw(const CirParams& p, double y_start, double horizon, const InversionConfig& config = {});

    double mean() const { return mean_; }
    double stddev() const { return stddev_; }
    /// True when Y(h) is (numerically) a point mass at its mean.
    bool degenerate() const { return degenerate_; }
    /// Number of Fourier terms retained.
    int terms() const { return static_cast<int>(coeff_.size()); }
    /// True when the characteristic function did not decay within max_terms.
    bool smoothed() const { return smoothed_; }

    /// Q(Y(h) <= x), clamped to [0, 1].
    double cdf(double x) const;

    /// CDF at mean + stddev * z_m for every grid point; made non-decreasing and
    /// clamped to [0, 1]. `out` must have grid.points().size() entries.
    void cdf_on_grid(const StandardGrid& grid, std::span<double> out) const;

  private:
    double standardized_cdf(double z) const;

    InversionConfig config_;
    double eta_ = 0.0;
    double mean_ = 0.0;
    double stddev_ = 0.0;
    bool degenerate_ = false;
    bool smoothed_ = false;
    // a_j = c_j phi_Z(eta j) / (pi j), j = 1..terms.
    std::vector<std::complex<double>> coeff_;
};

/// F_{Y(horizon)}(x) = Q(Y(horizon) <= x) started from p.y0.
double integrated_cir_cdf(const CirParams& p, double horizon, double x, const InversionConfig& config = {});

/// CIR parameters plus the deterministic integrated shift Psi that makes
/// E[exp(-Y(t) - Psi(t))] reproduce a market survival curve.
///
/// Psi is stored at knots and linearly interpolated; beyond the last knot it is
/// extended with the slope of the last segment.
class ShiftedIntensityModel {
  public:
    ShiftedIntensityModel() = default;
    /// Unshifted model, Psi = 0.
    explicit ShiftedIntensityModel(const CirParams& p);
    ShiftedIntensityModel(const CirParams& p, std::vector<double> knots, std::vector<double> shift);

    const CirParams& params() const { return params_; }
    std::span<const double> knots() const { return knots_; }
    std::span<const double> shift_values() const { return shift_; }

    /// Psi(t).
    double integrated_shift(double t) const;
    /// Model survival E[exp(-Lambda(t))] = P_CIR(0, t) exp(-Psi(t)).
    double survival(double t) const;
    /// True when psi = dPsi/dt is negative on some knot interval.
    bool has_negative_shift() const { return negative_shift_; }

  private:
    CirParams params_;
    std::vector<double> knots_{0.0};
    std::vector<double> shift_{0.0};
    bool negative_shift_ = false;
};

using SurvivalFunction = std::function<double(double)>;

/// Psi(t) = log(P_CIR(0,t) / Q_market(t)) at the given knots (knots[0] must be 0).
ShiftedIntensityModel calibrate_shift(const CirParams& p, const SurvivalFunction& market_survival,
                                      std::span<const double> knots);
/// Knots on a uniform grid of the given step covering [0, horizon].
ShiftedIntensityModel calibrate_shift(const CirParams& p, const SurvivalFunction& market_survival,
                                      double horizon, double step = 1.0 / 48.0);

/// Uniform grid 0 = t_0 < ... < t_n = horizon with spacing at most step.
std::vector<double> uniform_grid(double horizon, double step);

/// A simulated intensity path on a time grid.
struct IntensityPath {
    std::vector<double> grid;
    std::vector<double> y;          ///< CIR level at each grid point
    std::vector<double> integrated; ///< Y, trapezoidal integral of y
    std::vector<double> cumulative; ///< Lambda = Y + Psi

    /// Piecewise-linear interpolation of the stored series at time t.
    double level_at(double t) const;
    double cumulative_at(double t) const;
};

/// One exact transition y(u + dt) | y(u) from the scaled noncentral chi-square law.
double sample_cir_transition(const CirParams& p, double y_prev, double dt, RandomEngine& rng);

/// Exact-transition path of the CIR level with trapezoidal integration; Lambda = Y.
IntensityPath simulate_cir_path(const CirParams& p, std::span<const double> grid, RandomEngine& rng);
/// As simulate_cir_path, with Lambda = Y + Psi of the shifted model.
IntensityPath simulate_intensity_path(const ShiftedIntensityModel& m, std::span<const double> grid,
                                      RandomEngine& rng);

} // namespace brcva

#endif
