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

#ifndef BRCVA_DEPENDENCE_HPP
#define BRCVA_DEPENDENCE_HPP

#include "brcva/random.hpp"

#include <array>
#include <vector>

namespace brcva {

/// Name indices used throughout: 0 investor, 1 reference entity, 2 counterparty.
inline constexpr int investor = 0;
inline constexpr int reference = 1;
inline constexpr int counterparty = 2;

/// Pairwise correlations of the trivariate Gaussian copula.
struct CopulaCorrelations {
    double r01 = 0.0;
    double r02 = 0.0;
    double r12 = 0.0;

    double between(int a, int b) const;
    /// Correlations after exchanging the roles of names 0 and 2.
    CopulaCorrelations swapped() const { return {r12, r02, r01}; }
};

/// One joint draw: Gaussian factors z, uniforms u = Phi(z) and unit
/// exponential triggers xi = -log(1 - u).
struct CopulaDraw {
    std::array<double, 3> z{};
    std::array<double, 3> u{};
    std::array<double, 3> xi{};
};

/// Trivariate Gaussian copula on (U_0, U_1, U_2).
class GaussianCopula {
  public:
    /// Throws InvalidInput when a correlation is outside [-1, 1] or the matrix
    /// is not positive semidefinite.
    explicit GaussianCopula(const CopulaCorrelations& r);

    const CopulaCorrelations& correlations() const { return r_; }
    double correlation(int a, int b) const { return r_.between(a, b); }

    /// Lower-triangular factor L with L L^T equal to the correlation matrix.
    const std::array<std::array<double, 3>, 3>& cholesky() const { return chol_; }

    /// Consumes exactly three standard normals from rng.
    CopulaDraw sample(RandomEngine& rng) const;

    /// P(U_a <= ua | U_c = uc).
    double conditional_cdf(int a, double ua, int c, double uc) const;
    /// P(U_a <= ua, U_b <= ub | U_c = uc).
    double conditional_cdf(int a, double ua, int b, double ub, int c, double uc) const;
    /// C(u0, u1, u2) by one-dimensional quadrature over the third factor.
    double cdf(double u0, double u1, double u2) const;

  private:
    CopulaCorrelations r_;
    std::array<std::array<double, 3>, 3> chol_{};
};

/// Minimum of the leading principal minors of the correlation matrix.
double min_principal_minor(const CopulaCorrelations& r);

/// Law of U_1 given U_f = u_f, U_o > bar_o and U_1 > bar_1, where f is the
/// first-to-default name and o the other (surviving) party.
class ConditionalReferenceLaw {
  public:
    /// Throws DegenerateConditioning (a NumericalFailure) when the conditioning
    /// event has zero probability.
    ConditionalReferenceLaw(const GaussianCopula& copula, int first, double u_first, double bar_other,
                            double bar_reference);

    int first() const { return first_; }
    double bar_reference() const { return bar_ref_; }
    /// Probability of the conditioning event given U_f = u_f.
    double denominator() const { return den_; }

    /// P(U_1 <= u | conditioning); 0 for u <= bar_1.
    double cdf(double u) const;
    /// P(U_1 > 1 - (1 - bar_1) e^{-e} | conditioning): the chance that the
    /// reference name absorbs a further cumulative intensity e beyond its
    /// level at the first default.
    double survival_beyond(double e) const;

  private:
    const GaussianCopula* copula_;
    int first_;
    int other_;
    double u_first_;
    double bar_other_;
    double bar_ref_;
    double den_ = 0.0;
    double const_part_ = 0.0;
};

/// ConditionalReferenceLaw tabulated on a uniform grid in u and linearly
/// interpolated: nodes at bar_1, every multiple of spacing above it, and 1.
class ConditionalSurvivalTable {
  public:
    ConditionalSurvivalTable(const ConditionalReferenceLaw& law, double spacing = 1.0 / 400.0);

    double cdf(double u) const;
    double survival_beyond(double e) const;
    std::size_t size() const { return nodes_.size(); }

  private:
    double bar_ref_;
    double spacing_;
    std::vector<double> nodes_;
    std::vector<double> values_;
};

} // namespace brcva

#endif
