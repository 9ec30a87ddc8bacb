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

#ifndef BRCVA_CVAENGINE_HPP
#define BRCVA_CVAENGINE_HPP

#include "brcva/cdspricer.hpp"
#include "brcva/creditcurve.hpp"
#include "brcva/dependence.hpp"
#include "brcva/intensity.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace brcva {

/// Everything the engine needs: three shifted-CIR names (investor, reference,
/// counterparty), their LGDs, the copula, the CDS on the reference name and a
/// discount curve.
struct ScenarioModel {
    std::array<ShiftedIntensityModel, 3> names;
    std::array<double, 3> lgd{0.6, 0.6, 0.6};
    CopulaCorrelations correlations;
    CdsContract contract;
    DiscountCurve discount = DiscountCurve::flat(0.03);

    void validate() const;
    /// The same trade seen by the other party: names 0 and 2 exchanged.
    ScenarioModel swapped() const;
};

struct EngineConfig {
    /// Intensity simulation grid step (years).
    double simulation_step = 1.0 / 48.0;
    /// Premium and protection leg sub-step (years).
    double premium_step = 1.0 / 52.0;
    /// Spacing of the u-grid tabulating the conditional copula.
    double copula_spacing = 1.0 / 400.0;
    InversionConfig inversion;
    /// Value the residual CDS at the first default time itself rather than at
    /// the next coupon date.
    bool value_at_default = false;
};

/// Ordering of the two party defaults relative to the final maturity T.
enum class DefaultEvent {
    A,      ///< tau0 <= tau2 <= T
    B,      ///< tau0 <= T < tau2
    C,      ///< tau2 <= tau0 <= T
    D,      ///< tau2 <= T < tau0
    E_or_F, ///< both parties survive T; their order is not simulated
};

char event_label(DefaultEvent e);

inline constexpr double no_default = std::numeric_limits<double>::infinity();

struct DefaultDraw {
    CopulaDraw triggers;
    std::array<IntensityPath, 3> paths;
    std::array<double, 3> tau{no_default, no_default, no_default};
    DefaultEvent event = DefaultEvent::E_or_F;

    /// 0 or 2 when that party defaults first and before T, otherwise -1.
    int first_defaulter(double maturity) const;
    /// The same draw with names 0 and 2 exchanged.
    DefaultDraw swapped() const;
};

/// Shared read-only state for a run; build once per scenario.
class EngineContext {
  public:
    EngineContext(const ScenarioModel& model, const EngineConfig& config = {});

    const ScenarioModel& model() const { return model_; }
    const EngineConfig& config() const { return config_; }
    const GaussianCopula& copula() const { return copula_; }
    std::span<const double> simulation_grid() const { return grid_; }
    const StandardGrid& standard_grid() const { return standard_; }
    /// Coupon dates of the contract.
    std::span<const double> coupon_dates() const { return coupon_dates_; }
    /// Residual-value schedule seen from the coupon date with the given index.
    const ResidualSchedule& coupon_schedule(std::size_t index) const { return schedules_[index]; }

  private:
    ScenarioModel model_;
    EngineConfig config_;
    GaussianCopula copula_;
    std::vector<double> grid_;
    StandardGrid standard_;
    std::vector<double> coupon_dates_;
    std::vector<ResidualSchedule> schedules_;
};

/// tau = Lambda^{-1}(xi): first grid cell where the cumulated intensity reaches
/// xi, linearly interpolated; no_default when it never does.
double invert_cumulative(const IntensityPath& path, double xi);

/// Copula triggers, three independent intensity paths and the implied default times.
DefaultDraw draw_default_times(const EngineContext& ctx, RandomEngine& rng);

/// Q(tau1 > t | G_{tau_f}) for every t in `times` (all >= tau_f), given the
/// first defaulter and tau1 > tau_f. Made non-increasing.
///
/// Computed as E[S(Y1(tau_f, t) + Psi1(t) - Psi1(tau_f))], where S is the
/// conditional survival of the reference trigger beyond its level at tau_f and
/// the expectation runs over the integrated CIR law on a standardized grid.
std::vector<double> conditional_ref_survival(const EngineContext& ctx, const DefaultDraw& draw, int first,
                                             std::span<const double> times);

/// Same quantity computed as a Stieltjes sum of the integrated CIR CDF against
/// increments of the conditional copula on the u-grid. Slower; kept as a
/// check on conditional_ref_survival.
std::vector<double> conditional_ref_survival_reference(const EngineContext& ctx, const DefaultDraw& draw, int first,
                                                       std::span<const double> times);

/// Receiver and payer adjustment contributions of one path, discounted to 0.
struct PathContribution {
    double receiver = 0.0;
    double payer = 0.0;
};

/// Option on the residual CDS value at the first party default, signed by
/// which party defaulted. Zero when no party defaults before T, when the
/// reference name defaults first, or when no premium period remains.
PathContribution adjust_at_default(const EngineContext& ctx, const DefaultDraw& draw);

/// Per-path contributions for paths [first_path, first_path + n_paths).
/// Path i always uses the stream derive_seed(seed, i), so any partition of the
/// index range concatenates to the samples of a single run.
struct PathSamples {
    std::uint64_t seed = 0;
    std::uint64_t first_path = 0;
    std::vector<double> receiver;
    std::vector<double> payer;
};

/// OpenMP-parallel path loop.
PathSamples simulate_paths(const EngineContext& ctx, std::uint64_t seed, std::uint64_t first_path,
                           std::uint64_t n_paths);
/// Single-threaded reference of simulate_paths; produces identical samples.
PathSamples simulate_paths_serial(const EngineContext& ctx, std::uint64_t seed, std::uint64_t first_path,
                                  std::uint64_t n_paths);

struct CvaResult {
    double payer_bp = 0.0;
    double payer_se = 0.0;
    double receiver_bp = 0.0;
    double receiver_se = 0.0;
    std::uint64_t n_paths = 0;
    std::uint64_t seed = 0;
};

/// Mean and standard error, in bp, of the concatenation of contiguous parts.
CvaResult summarize(std::span<const PathSamples> parts);

/// BR-CVA of the receiver and payer CDS from n_paths Monte Carlo paths.
CvaResult calculate_adjustment(const ScenarioModel& model, std::uint64_t n_paths, std::uint64_t seed,
                               const EngineConfig& config = {});

/// Inception and valuation scenarios of a mark-to-market: same spread and
/// LGDs, each model with its own curves and time origin.
struct MtmInputs {
    ScenarioModel inception;
    ScenarioModel valuation;
    /// Years from inception to the valuation date.
    double elapsed = 0.0;
};

struct MtmResult {
    Direction direction = Direction::payer;
    double mtm_bp = 0.0;
    double mtm_se = 0.0;
    double risk_free_bp = 0.0; ///< MTM without counterparty risk
    CvaResult inception;
    CvaResult valuation;
};

/// MTM = CDS^D(T_c) - CDS^D(T_a) / D(T_a, T_c) with CDS^D = CDS - BR-CVA, for
/// the investor on each side of the trade (payer first, then receiver).
std::array<MtmResult, 2> mark_to_market(const MtmInputs& inputs, std::uint64_t n_paths, std::uint64_t seed,
                                        const EngineConfig& config = {});

} // namespace brcva

#endif
