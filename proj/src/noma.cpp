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

#include "risnoma/noma.hpp"

#include "risnoma/errors.hpp"
#include "risnoma/special_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace risnoma
{
namespace
{

void check_rank(std::size_t rank, std::size_t total)
{
    if (rank < 1 || rank > total)
    {
        throw DomainError("rank " + std::to_string(rank) + " outside [1, " + std::to_string(total) + "]");
    }
}

double tail_sum(std::span<const double> beta, std::size_t rank)
{
    return std::accumulate(beta.begin() + static_cast<std::ptrdiff_t>(rank), beta.end(), 0.0);
}

} // namespace

PowerAllocation::PowerAllocation(std::vector<double> beta) : beta_(std::move(beta))
{
    if (beta_.empty())
    {
        throw DomainError("PowerAllocation: empty coefficient vector");
    }
    for (std::size_t i = 0; i < beta_.size(); ++i)
    {
        const double b = beta_[i];
        if (!(b > 0.0 && b <= 1.0) || (beta_.size() > 1 && b == 1.0))
        {
            throw DomainError("PowerAllocation: beta_" + std::to_string(i + 1) + " outside (0, 1)");
        }
        if (i > 0 && !(beta_[i - 1] > b))
        {
            throw DomainError("PowerAllocation: coefficients must be strictly decreasing at rank " +
                              std::to_string(i + 1));
        }
    }
    const double sum = std::accumulate(beta_.begin(), beta_.end(), 0.0);
    if (std::fabs(sum - 1.0) > 1e-9)
    {
        throw DomainError("PowerAllocation: coefficients sum to " + std::to_string(sum) + ", expected 1");
    }
}

double achievable_rate(double gamma, std::span<const double> beta, std::size_t rank)
{
    return decode_rate(gamma, beta, rank, rank);
}

double decode_rate(double gamma, std::span<const double> beta, std::size_t rank_m, std::size_t rank_j)
{
    check_rank(rank_m, beta.size());
    check_rank(rank_j, beta.size());
    if (rank_j > rank_m)
    {
        throw DomainError("decode_rate: rank j must not exceed rank m");
    }
    if (!(gamma >= 0.0))
    {
        throw DomainError("decode_rate: SNR must be >= 0");
    }
    if (std::isinf(gamma))
    {
        const double interference = tail_sum(beta, rank_j);
        return interference > 0.0 ? std::log2(1.0 + beta[rank_j - 1] / interference)
                                   : std::numeric_limits<double>::infinity();
    }
    const double sinr = gamma * beta[rank_j - 1] / (gamma * tail_sum(beta, rank_j) + 1.0);
    return std::log2(1.0 + sinr);
}

std::size_t first_infeasible_rank(std::span<const double> beta, std::span<const double> rates, std::size_t up_to_rank)
{
    for (std::size_t j = 1; j <= up_to_rank; ++j)
    {
        const double need = std::exp2(rates[j - 1]) - 1.0;
        if (!(need * tail_sum(beta, j) < beta[j - 1]))
        {
            return j;
        }
    }
    return 0;
}

SicThresholds sic_thresholds(std::span<const double> beta, std::span<const double> rates, std::size_t rank)
{
    check_rank(rank, beta.size());
    if (rates.size() != beta.size())
    {
        throw DomainError("sic_thresholds: one target rate per UAV required");
    }
    SicThresholds out;
    out.gamma_lb.reserve(rank);
    for (std::size_t j = 1; j <= rank; ++j)
    {
        const double need = std::exp2(rates[j - 1]) - 1.0;
        const double denom = beta[j - 1] - need * tail_sum(beta, j);
        if (!(denom > 0.0))
        {
            throw InfeasibleAllocation(j, "SIC constraint violated at rank " + std::to_string(j) +
                                              ": (2^R - 1) * sum_{i>j} beta_i >= beta_j");
        }
        out.gamma_lb.push_back(need / denom);
    }
    out.gamma_mlb = rank < beta.size() ? *std::max_element(out.gamma_lb.begin(), out.gamma_lb.end())
                                       : out.gamma_lb.back();
    return out;
}

double ordered_cdf(double parent_cdf_value, std::size_t rank, std::size_t total)
{
    check_rank(rank, total);
    if (!(parent_cdf_value >= 0.0 && parent_cdf_value <= 1.0))
    {
        throw DomainError("ordered_cdf: parent CDF value must lie in [0, 1]");
    }
    const auto m = static_cast<unsigned>(rank);
    const auto big_m = static_cast<unsigned>(total);
    long double sum = 0.0L;
    for (unsigned n = 0; n <= big_m - m; ++n)
    {
        const long double term = static_cast<long double>(special::binomial(big_m - m, n)) *
                                 std::pow(static_cast<long double>(parent_cdf_value), m + n) / (m + n);
        sum += (n % 2 == 0) ? term : -term;
    }
    const long double scale = static_cast<long double>(m) * special::binomial(big_m, m);
    return std::clamp(static_cast<double>(scale * sum), 0.0, 1.0);
}

double outage_probability(const OutageQuery &q, std::span<const double> beta, OutageMode mode)
{
    if (q.total != beta.size())
    {
        throw DomainError("outage_probability: allocation size differs from the number of UAVs");
    }
    if (!q.parent_cdf)
    {
        throw DomainError("outage_probability: no parent CDF");
    }
    SicThresholds t;
    try
    {
        t = sic_thresholds(beta, q.target_rates, q.rank);
    }
    catch (const InfeasibleAllocation &)
    {
        if (mode == OutageMode::lenient)
        {
            return 1.0;
        }
        throw;
    }
    return ordered_cdf(q.parent_cdf(t.gamma_mlb), q.rank, q.total);
}

} // namespace risnoma
