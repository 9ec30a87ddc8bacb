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

#ifndef BRCVA_NORMAL_HPP
#define BRCVA_NORMAL_HPP

namespace brcva {

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal distribution function. Accurate in both tails.
double norm_cdf(double x);

/// Inverse of norm_cdf on (0,1); returns -inf at 0 and +inf at 1.
double norm_quantile(double u);

/// P(X < h, Y < k) for a standard bivariate normal pair with correlation rho.
///
/// Genz's adaptation of the Drezner-Wesolowsky method: Gauss-Legendre
/// quadrature of Plackett's identity for |rho| < 0.925 and an asymptotic
/// expansion around |rho| = 1 otherwise. Absolute error is close to machine
/// precision. Infinite limits and |rho| = 1 are handled exactly.
double bivariate_normal_cdf(double h, double k, double rho);

} // namespace brcva

#endif
