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

#ifndef RISNOMA_TESTS_ORACLES_HPP
#define RISNOMA_TESTS_ORACLES_HPP

// Reference computations for the tests. Nothing here calls into the library's
// numerics, so agreement is evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace oracle
{

namespace detail
{

inline double simpson_step(const std::function<double(double)> &f, double a, double b, double fa, double fm, double fb,
                           double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature on a finite interval, split into `pieces` panels.
inline double integrate(const std::function<double(double)> &f, double a, double b, double tol = 1e-13,
                        int pieces = 64)
{
    double total = 0.0;
    const double h = (b - a) / pieces;
    for (int i = 0; i < pieces; ++i)
    {
        const double lo = a + i * h;
        const double hi = (i + 1 == pieces) ? b : lo + h;
        const double fa = f(lo);
        const double fb = f(hi);
        const double fm = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += detail::simpson_step(f, lo, hi, fa, fm, fb, whole, tol / pieces, 40);
    }
    return total;
}

/// Integral over [a, inf) via x = a + t / (1 - t).
inline double integrate_to_infinity(const std::function<double(double)> &f, double a, double tol = 1e-13)
{
    auto g = [&](double t) {
        if (t >= 1.0)
        {
            return 0.0;
        }
        const double x = a + t / (1.0 - t);
        const double v = f(x) / ((1.0 - t) * (1.0 - t));
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate(g, 0.0, 1.0, tol, 256);
}

/// Gamma function by the product (n-1)! for integers and the reflection-free
/// Stirling series with upward recurrence otherwise.
inline double gamma_fn(double x)
{
    double shift = 1.0;
    while (x < 20.0)
    {
        shift *= x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series =
        inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
    const double log_g = (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * M_PI) + series;
    return std::exp(log_g) / shift;
}

/// Regularized lower incomplete gamma by its power series (no cancellation for
/// x below a few times s).
inline double gamma_p_series(double s, double x)
{
    if (x <= 0.0)
    {
        return 0.0;
    }
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 100000; ++n)
    {
        term *= x / (s + n);
        sum += term;
        if (term < sum * 1e-17)
        {
            break;
        }
    }
    return std::exp(-x + s * std::log(x) - std::log(gamma_fn(s))) * sum;
}

/// Standard normal upper tail by integrating the density.
inline double q_integral(double x)
{
    auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
    if (x >= 0.0)
    {
        return integrate_to_infinity(pdf, x, 1e-15);
    }
    return 1.0 - integrate_to_infinity(pdf, -x, 1e-15);
}

/// Pascal's triangle.
inline std::uint64_t binomial_pascal(unsigned n, unsigned k)
{
    std::vector<std::uint64_t> row(n + 1, 0);
    row[0] = 1;
    for (unsigned i = 1; i <= n; ++i)
    {
        for (unsigned j = i; j > 0; --j)
        {
            row[j] += row[j - 1];
        }
    }
    return row[k];
}

/// Empirical CDF of `samples` (sorted in place) at x.
inline double ecdf(const std::vector<double> &sorted, double x)
{
    return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin()) /
           static_cast<double>(sorted.size());
}

/// Kolmogorov-Smirnov distance between sorted samples and a CDF.
inline double ks_distance(const std::vector<double> &sorted, const std::function<double(double)> &cdf)
{
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i)
    {
        const double f = cdf(sorted[i]);
        d = std::max({d, std::fabs(f - static_cast<double>(i) / n), std::fabs(static_cast<double>(i + 1) / n - f)});
    }
    return d;
}

/// Every integer composition k_1 + ... + k_M = K (k_i >= 0) with
/// (2^R - 1) * sum_{i>j} k_i < k_j for all j, in lexicographic order. Integer
/// arithmetic whenever 2^R - 1 is integral.
inline std::vector<std::vector<int>> feasible_compositions(int total, int parts, double rate)
{
    const double factor = std::exp2(rate) - 1.0;
    std::vector<std::vector<int>> out;
    std::vector<int> k(parts, 0);
    std::function<void(int, int)> rec = [&](int d, int left) {
        if (d + 1 == parts)
        {
            k[d] = left;
            long long tail = 0;
            for (int j = parts - 1; j >= 0; --j)
            {
                if (!(factor * static_cast<double>(tail) < static_cast<double>(k[j])))
                {
                    return;
                }
                tail += k[j];
            }
            out.push_back(k);
            return;
        }
        for (int v = 0; v <= left; ++v)
        {
            k[d] = v;
            rec(d + 1, left - v);
        }
    };
    rec(0, total);
    return out;
}

} // namespace oracle

#endif
