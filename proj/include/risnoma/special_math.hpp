// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISNOMA_SPECIAL_MATH_HPP
#define RISNOMA_SPECIAL_MATH_HPP

#include <cstdint>

// Special functions used by the closed-form distributions. All functions are
// pure and throw risnoma::DomainError outside their stated domains.
namespace risnoma::special
{

/// Gamma function, x > 0.
double gamma(double x);

/// Natural log of the gamma function, x > 0.
double log_gamma(double x);

/// Unregularized lower incomplete gamma: integral_0^x t^(s-1) e^(-t) dt.
double lower_inc_gamma(double s, double x);

/// Unregularized upper incomplete gamma: Gamma(s) - lower_inc_gamma(s, x).
double upper_inc_gamma(double s, double x);

/// Regularized lower incomplete gamma P(s, x) = lower_inc_gamma(s, x) / Gamma(s).
/// Stays finite when Gamma(s) overflows (large s).
double gamma_p(double s, double x);

/// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x).
double gamma_q(double s, double x);

/// Modified Bessel function of the second kind K_v(x) for real order v, x > 0.
double bessel_k(double v, double x);

/// Standard normal tail probability Q(x) = P(Z > x).
double q_function(double x);

/// Exact binomial coefficient C(n, k). Exact for n <= 60.
std::uint64_t binomial(unsigned n, unsigned k);

} // namespace risnoma::special

#endif
