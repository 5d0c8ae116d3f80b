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

#ifndef RISNOMA_NOMA_HPP
#define RISNOMA_NOMA_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

// Downlink NOMA with perfect SIC. Ranks are 1-based and run from the weakest
// UAV (rank 1, largest power share) to the strongest (rank M).
namespace risnoma
{

/// Validated power split: entries in (0, 1), strictly decreasing, summing to 1
/// within 1e-9.
class PowerAllocation
{
  public:
    explicit PowerAllocation(std::vector<double> beta);

    std::span<const double> values() const { return beta_; }
    std::size_t size() const { return beta_.size(); }
    double operator[](std::size_t i) const { return beta_[i]; }

  private:
    std::vector<double> beta_;
};

/// R_m = log2(1 + gamma beta_m / (gamma sum_{i>m} beta_i + 1)).
double achievable_rate(double gamma, std::span<const double> beta, std::size_t rank);

/// R_{m,j}: rate at which rank m decodes rank j's signal, j <= m.
double decode_rate(double gamma, std::span<const double> beta, std::size_t rank_m, std::size_t rank_j);

/// (2^R_j - 1) * sum_{i>j} beta_i < beta_j for every j in [1, up_to_rank]. Returns
/// the first violating rank or 0.
std::size_t first_infeasible_rank(std::span<const double> beta, std::span<const double> rates, std::size_t up_to_rank);

struct SicThresholds
{
    std::vector<double> gamma_lb; ///< gamma_j^lb for j = 1..m
    double gamma_mlb = 0.0;
};

/// SNR thresholds for successful SIC at `rank`. gamma_mlb is max_{j<=m} gamma_j^lb
/// for m < M and gamma_M^lb itself for m = M. Throws InfeasibleAllocation naming
/// the first rank whose denominator is not positive.
SicThresholds sic_thresholds(std::span<const double> beta, std::span<const double> rates, std::size_t rank);

/// CDF of the rank-th smallest of M i.i.d. draws, given the parent CDF value:
/// m C(M, m) sum_{n=0}^{M-m} C(M-m, n) (-1)^n F^(m+n) / (m+n).
double ordered_cdf(double parent_cdf_value, std::size_t rank, std::size_t total);

struct OutageQuery
{
    std::size_t rank = 1;
    std::size_t total = 1;
    std::function<double(double)> parent_cdf;
    std::vector<double> target_rates;
};

enum class OutageMode
{
    strict,  ///< infeasible allocation throws
    lenient, ///< infeasible allocation reports outage 1
};

/// P_m^out = F_{gamma_m}(gamma_m^mlb).
double outage_probability(const OutageQuery &q, std::span<const double> beta, OutageMode mode = OutageMode::strict);

} // namespace risnoma

#endif
