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

#include "risnoma/special_math.hpp"

#include "risnoma/errors.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <string>

namespace risnoma::special
{
namespace
{

void require_finite(double x, const char *name)
{
    if (!std::isfinite(x))
    {
        throw DomainError(std::string(name) + " must be finite");
    }
}

void check_incomplete_args(double s, double x)
{
    require_finite(s, "s");
    if (std::isnan(x))
    {
        throw DomainError("incomplete gamma: x is NaN");
    }
    if (s <= 0.0)
    {
        throw DomainError("incomplete gamma: s must be > 0, got " + std::to_string(s));
    }
    if (x < 0.0)
    {
        throw DomainError("incomplete gamma: x must be >= 0, got " + std::to_string(x));
    }
}

} // namespace

double gamma(double x)
{
    require_finite(x, "x");
    if (x <= 0.0)
    {
        throw DomainError("gamma: x must be > 0, got " + std::to_string(x));
    }
    return boost::math::tgamma(x);
}

double log_gamma(double x)
{
    require_finite(x, "x");
    if (x <= 0.0)
    {
        throw DomainError("log_gamma: x must be > 0, got " + std::to_string(x));
    }
    return boost::math::lgamma(x);
}

double gamma_p(double s, double x)
{
    check_incomplete_args(s, x);
    if (x == 0.0)
    {
        return 0.0;
    }
    if (std::isinf(x))
    {
        return 1.0;
    }
    return boost::math::gamma_p(s, x);
}

double gamma_q(double s, double x)
{
    check_incomplete_args(s, x);
    if (x == 0.0)
    {
        return 1.0;
    }
    if (std::isinf(x))
    {
        return 0.0;
    }
    return boost::math::gamma_q(s, x);
}

double lower_inc_gamma(double s, double x)
{
    check_incomplete_args(s, x);
    if (x == 0.0)
    {
        return 0.0;
    }
    if (std::isinf(x))
    {
        return gamma(s);
    }
    return boost::math::tgamma_lower(s, x);
}

double upper_inc_gamma(double s, double x)
{
    check_incomplete_args(s, x);
    if (x == 0.0)
    {
        return gamma(s);
    }
    if (std::isinf(x))
    {
        return 0.0;
    }
    return boost::math::tgamma(s, x);
}

double bessel_k(double v, double x)
{
    require_finite(v, "v");
    require_finite(x, "x");
    if (x <= 0.0)
    {
        throw DomainError("bessel_k: x must be > 0, got " + std::to_string(x));
    }
    // K_v = K_{-v}; Boost handles negative order but the reflection is exact.
    return boost::math::cyl_bessel_k(std::fabs(v), x);
}

double q_function(double x)
{
    if (std::isnan(x))
    {
        throw DomainError("q_function: x is NaN");
    }
    return 0.5 * boost::math::erfc(x / std::numbers::sqrt2);
}

std::uint64_t binomial(unsigned n, unsigned k)
{
    if (k > n)
    {
        throw DomainError("binomial: k > n (" + std::to_string(k) + " > " + std::to_string(n) + ")");
    }
    k = std::min(k, n - k);
    std::uint64_t acc = 1;
    for (unsigned i = 1; i <= k; ++i)
    {
        // acc = C(n - k + i - 1, i - 1), so acc * (n - k + i) / i is exact; dividing
        // out gcd(acc, i) first keeps the product small.
        const std::uint64_t g = std::gcd(acc, static_cast<std::uint64_t>(i));
        const std::uint64_t factor = (n - k + i) / (i / g);
        acc /= g;
        if (acc > std::numeric_limits<std::uint64_t>::max() / factor)
        {
            throw DomainError("binomial: C(" + std::to_string(n) + ", " + std::to_string(k) + ") overflows 64 bits");
        }
        acc *= factor;
    }
    return acc;
}

} // namespace risnoma::special
