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

#ifndef RISNOMA_RUOM_HPP
#define RISNOMA_RUOM_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

// Fairness-efficiency optimization of NOMA power shares and RIS element counts.
//
// Outer problem: min over beta of max_m P_m^out(beta, N_m), subject to
// sum(beta) = 1 and (2^R_j - 1) sum_{i>j} beta_i < beta_j. Inner problem: the
// fewest elements per UAV keeping P_m^out < delta, within each RIS's capacity.
namespace risnoma
{

struct RuomParams
{
    double lambda = 0.1;    ///< resolution shrink factor per refinement
    double delta = 1e-3;    ///< outage threshold
    double eps_in = 0.1;    ///< initial grid resolution
    double eps_ac = 1e-8;   ///< refinement stops once the resolution reaches this
    double eps_conv = 1e-4; ///< ||beta^t - beta^(t-1)||_2 convergence tolerance
    int max_iter = 100;
    bool warm_start = false;        ///< start each fairness loop from beta^(t-1)
    bool anchor_local_grid = false; ///< local grid beta_m + {-eps, 0, eps} instead of multiples of eps
    unsigned threads = 1;           ///< candidate evaluation threads, 0 = hardware

    void validate() const;

    /// Number of refinements: ceil(log_lambda(eps_ac / eps_in)).
    int refinements() const;

    friend bool operator==(const RuomParams &, const RuomParams &) = default;
};

/// Candidate power vectors on the grid {0, eps, 2 eps, ..., 1}. Without a prior
/// vector the whole grid G^M is searched; otherwise coordinate m is limited to
/// [beta_m - eps, beta_m + eps] and the prior vector itself is always retained.
/// Every returned vector sums to 1 (within 1e-9 M) and satisfies the SIC
/// constraint strictly. Output is sorted lexicographically.
std::vector<std::vector<double>> pgs(const std::optional<std::vector<double>> &beta_prev, double eps_sr,
                                     std::span<const double> rates, std::size_t num_uavs,
                                     bool anchor_local_grid = false);

/// Per-UAV outage for UAV index m (rank m + 1) at power vector beta with n elements.
/// Must be safe to call concurrently.
using OutageFn = std::function<double(std::size_t m, std::span<const double> beta, int n_elements)>;

struct RuomProblem
{
    std::vector<double> rates;          ///< target rate per rank
    std::vector<std::size_t> ris_of_uav; ///< RIS serving each rank
    std::vector<int> ris_capacity;       ///< max elements per RIS
    OutageFn outage;

    std::size_t num_uavs() const { return rates.size(); }
    void validate() const;
};

struct CandidateScore
{
    std::vector<double> beta;
    std::vector<double> outage;
    double max_outage = 0.0;
};

/// Candidate minimizing the maximum outage; ties go to the lexicographically
/// smallest vector. The result does not depend on `threads`.
CandidateScore evaluate_candidates(std::span<const std::vector<double>> candidates, const RuomProblem &problem,
                                   std::span<const int> n_elements, unsigned threads = 1);

struct FairnessResult
{
    CandidateScore best;
    std::vector<double> refinement_max_outage; ///< after each resolution step
};

/// The progressive refinement loop for fixed element counts.
FairnessResult fairness_search(const RuomProblem &problem, std::span<const int> n_elements, const RuomParams &params,
                               const std::optional<std::vector<double>> &start = std::nullopt);

struct RisAssignment
{
    std::vector<std::vector<int>> n; ///< n[m][k], rank-major
    std::vector<int> caps;

    int column_sum(std::size_t k) const;
    int total() const;
};

struct RuomIteration
{
    int t = 0;
    std::vector<double> beta;
    std::vector<int> n_elements; ///< per rank, on its serving RIS
    std::vector<double> outage;
    double max_outage = 0.0;
    int total_elements = 0;
    std::vector<double> refinement_max_outage;
    std::vector<std::size_t> capacity_exhausted; ///< ranks still >= delta at a full RIS
};

struct RuomTrace
{
    std::vector<RuomIteration> iterations;
};

struct RuomResult
{
    std::vector<double> beta;
    RisAssignment assignment;
    RuomTrace trace;
    bool converged = false;
};

/// Alternates the fairness search over beta with the per-UAV element trimming
/// and growth until beta stops moving. Throws NoFeasibleAllocation when the
/// coarsest grid has no feasible vector.
RuomResult ruom(const RuomProblem &problem, const RuomParams &params);

} // namespace risnoma

#endif
