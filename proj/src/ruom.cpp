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

#include "risnoma/ruom.hpp"

#include "risnoma/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

namespace risnoma
{

void RuomParams::validate() const
{
    if (!(lambda > 0.0 && lambda < 1.0))
    {
        throw ConfigError("ruom.lambda must lie in (0, 1)");
    }
    if (!(delta > 0.0 && delta < 1.0))
    {
        throw ConfigError("ruom.delta must lie in (0, 1)");
    }
    if (!(eps_in > 0.0 && eps_in <= 1.0))
    {
        throw ConfigError("ruom.eps_in must lie in (0, 1]");
    }
    if (!(eps_ac > 0.0 && eps_ac < eps_in))
    {
        throw ConfigError("ruom.eps_ac must satisfy 0 < eps_ac < eps_in");
    }
    if (!(eps_conv > 0.0))
    {
        throw ConfigError("ruom.eps_conv must be > 0");
    }
    if (max_iter < 1)
    {
        throw ConfigError("ruom.max_iter must be >= 1");
    }
}

int RuomParams::refinements() const
{
    const double exact = std::log(eps_ac / eps_in) / std::log(lambda);
    // Absorb rounding so that e.g. log_0.1(1e-7) counts as exactly 7.
    return static_cast<int>(std::ceil(exact - 1e-9));
}

void RuomProblem::validate() const
{
    if (rates.empty())
    {
        throw DomainError("RuomProblem: no UAVs");
    }
    if (ris_of_uav.size() != rates.size())
    {
        throw DomainError("RuomProblem: one serving RIS per UAV required");
    }
    for (std::size_t k : ris_of_uav)
    {
        if (k >= ris_capacity.size())
        {
            throw DomainError("RuomProblem: serving RIS index out of range");
        }
    }
    if (!outage)
    {
        throw DomainError("RuomProblem: no outage function");
    }
}

namespace
{

constexpr double kGridTol = 1e-9;

// Grid {0, eps, 2 eps, ...} up to 1, with 1 appended when 1/eps is not integral.
std::vector<double> global_grid(double eps)
{
    const auto steps = static_cast<long long>(std::floor(1.0 / eps + kGridTol));
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(steps) + 2);
    for (long long k = 0; k <= steps; ++k)
    {
        g.push_back(std::min(1.0, static_cast<double>(k) * eps));
    }
    if (std::fabs(g.back() - 1.0) > kGridTol)
    {
        g.push_back(1.0);
    }
    return g;
}

// Points of global_grid(eps) inside [lo, hi], without building the whole grid.
std::vector<double> grid_slice(double eps, double lo, double hi)
{
    const auto steps = static_cast<long long>(std::floor(1.0 / eps + kGridTol));
    const auto first = std::max(0LL, static_cast<long long>(std::ceil(lo / eps - kGridTol)));
    const auto last = std::min(steps, static_cast<long long>(std::floor(hi / eps + kGridTol)));
    std::vector<double> g;
    for (long long k = first; k <= last; ++k)
    {
        g.push_back(std::min(1.0, static_cast<double>(k) * eps));
    }
    const double top = std::min(1.0, static_cast<double>(steps) * eps);
    if (std::fabs(top - 1.0) > kGridTol && hi >= 1.0 - kGridTol)
    {
        g.push_back(1.0);
    }
    return g;
}

bool feasible(std::span<const double> beta, std::span<const double> rates)
{
    const double sum = std::accumulate(beta.begin(), beta.end(), 0.0);
    if (std::fabs(sum - 1.0) > kGridTol * static_cast<double>(beta.size()))
    {
        return false;
    }
    // Grid points carry rounding noise (3 * 0.1 != 0.1 + 0.2), so a slack within
    // kTieTol counts as the equality case, which the strict constraint excludes.
    constexpr double kTieTol = 1e-12;
    double tail = 0.0;
    for (std::size_t j = beta.size(); j-- > 0;)
    {
        if (!(beta[j] - (std::exp2(rates[j]) - 1.0) * tail > kTieTol))
        {
            return false;
        }
        tail += beta[j];
    }
    return true;
}

// Lexicographic product of per-coordinate ascending value lists, pruned on the
// running sum.
void enumerate(const std::vector<std::vector<double>> &axes, std::span<const double> rates,
               std::vector<std::vector<double>> &out)
{
    const std::size_t dims = axes.size();
    const double tol = kGridTol * static_cast<double>(dims);
    std::vector<double> current(dims);
    auto recurse = [&](auto &self, std::size_t d, double partial) -> void {
        if (d + 1 == dims)
        {
            const double need = 1.0 - partial;
            const auto &axis = axes[d];
            for (auto it = std::lower_bound(axis.begin(), axis.end(), need - tol); it != axis.end() && *it <= need + tol;
                 ++it)
            {
                current[d] = *it;
                if (feasible(current, rates))
                {
                    out.push_back(current);
                }
            }
            return;
        }
        for (double v : axes[d])
        {
            if (partial + v > 1.0 + tol)
            {
                break;
            }
            current[d] = v;
            self(self, d + 1, partial + v);
        }
    };
    recurse(recurse, 0, 0.0);
}

bool same_vector(std::span<const double> a, std::span<const double> b)
{
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](double x, double y) { return std::fabs(x - y) <= 1e-15; });
}

} // namespace

std::vector<std::vector<double>> pgs(const std::optional<std::vector<double>> &beta_prev, double eps_sr,
                                     std::span<const double> rates, std::size_t num_uavs, bool anchor_local_grid)
{
    if (!(eps_sr > 0.0 && eps_sr <= 1.0))
    {
        throw DomainError("pgs: resolution must lie in (0, 1]");
    }
    if (rates.size() != num_uavs)
    {
        throw DomainError("pgs: one target rate per UAV required");
    }
    if (beta_prev && beta_prev->size() != num_uavs)
    {
        throw DomainError("pgs: prior vector has the wrong length");
    }

    std::vector<std::vector<double>> axes(num_uavs);
    if (!beta_prev)
    {
        std::fill(axes.begin(), axes.end(), global_grid(eps_sr));
    }
    else
    {
        for (std::size_t m = 0; m < num_uavs; ++m)
        {
            const double centre = (*beta_prev)[m];
            if (anchor_local_grid)
            {
                for (double v : {centre - eps_sr, centre, centre + eps_sr})
                {
                    if (v >= 0.0 && v <= 1.0)
                    {
                        axes[m].push_back(v);
                    }
                }
            }
            else
            {
                axes[m] = grid_slice(eps_sr, std::max(0.0, centre - eps_sr), std::min(1.0, centre + eps_sr));
            }
        }
    }

    std::vector<std::vector<double>> out;
    enumerate(axes, rates, out);

    if (beta_prev && feasible(*beta_prev, rates))
    {
        // A grid point within rounding of the incumbent is replaced by it, so the
        // incumbent's exact score stays available.
        const auto pos = std::lower_bound(out.begin(), out.end(), *beta_prev);
        if (pos != out.end() && same_vector(*pos, *beta_prev))
        {
            *pos = *beta_prev;
        }
        else if (pos != out.begin() && same_vector(*std::prev(pos), *beta_prev))
        {
            *std::prev(pos) = *beta_prev;
        }
        else
        {
            out.insert(pos, *beta_prev);
        }
    }
    return out;
}

namespace
{

CandidateScore score(const std::vector<double> &beta, const RuomProblem &problem, std::span<const int> n_elements)
{
    CandidateScore s;
    s.beta = beta;
    s.outage.resize(problem.num_uavs());
    for (std::size_t m = 0; m < problem.num_uavs(); ++m)
    {
        s.outage[m] = problem.outage(m, beta, n_elements[m]);
    }
    s.max_outage = *std::max_element(s.outage.begin(), s.outage.end());
    return s;
}

bool better(const CandidateScore &a, const CandidateScore &b)
{
    if (a.max_outage != b.max_outage)
    {
        return a.max_outage < b.max_outage;
    }
    return std::lexicographical_compare(a.beta.begin(), a.beta.end(), b.beta.begin(), b.beta.end());
}

} // namespace

CandidateScore evaluate_candidates(std::span<const std::vector<double>> candidates, const RuomProblem &problem,
                                   std::span<const int> n_elements, unsigned threads)
{
    if (candidates.empty())
    {
        throw DomainError("evaluate_candidates: empty candidate set");
    }
    std::vector<CandidateScore> scores(candidates.size());
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, candidates.size()));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < candidates.size(); ++i)
        {
            scores[i] = score(candidates[i], problem, n_elements);
        }
    }
    else
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
        {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < candidates.size(); i += workers)
                {
                    scores[i] = score(candidates[i], problem, n_elements);
                }
            });
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
    {
        if (better(scores[i], scores[best]))
        {
            best = i;
        }
    }
    return scores[best];
}

FairnessResult fairness_search(const RuomProblem &problem, std::span<const int> n_elements, const RuomParams &params,
                               const std::optional<std::vector<double>> &start)
{
    problem.validate();
    params.validate();
    FairnessResult result;
    std::optional<std::vector<double>> beta = start;
    const int steps = params.refinements();
    for (int r = 0; r < steps; ++r)
    {
        const double eps = params.eps_in * std::pow(params.lambda, r);
        const auto candidates = pgs(beta, eps, problem.rates, problem.num_uavs(), params.anchor_local_grid);
        if (candidates.empty())
        {
            throw NoFeasibleAllocation("no power vector on the grid with resolution " + std::to_string(eps) +
                                       " satisfies the SIC constraints");
        }
        result.best = evaluate_candidates(candidates, problem, n_elements, params.threads);
        beta = result.best.beta;
        result.refinement_max_outage.push_back(result.best.max_outage);
    }
    return result;
}

int RisAssignment::column_sum(std::size_t k) const
{
    int s = 0;
    for (const auto &row : n)
    {
        s += row[k];
    }
    return s;
}

int RisAssignment::total() const
{
    int s = 0;
    for (const auto &row : n)
    {
        s += std::accumulate(row.begin(), row.end(), 0);
    }
    return s;
}

RuomResult ruom(const RuomProblem &problem, const RuomParams &params)
{
    problem.validate();
    params.validate();
    const std::size_t num_uavs = problem.num_uavs();

    RuomResult result;
    result.assignment.caps = problem.ris_capacity;
    result.assignment.n.assign(num_uavs, std::vector<int>(problem.ris_capacity.size(), 0));
    std::vector<int> n_elements(num_uavs, 0);

    std::optional<std::vector<double>> previous;
    for (int t = 1; t <= params.max_iter; ++t)
    {
        const auto start = params.warm_start ? previous : std::nullopt;
        FairnessResult fair = fairness_search(problem, n_elements, params, start);
        const std::vector<double> beta = fair.best.beta;

        RuomIteration it;
        it.t = t;
        it.refinement_max_outage = std::move(fair.refinement_max_outage);

        for (std::size_t m = 0; m < num_uavs; ++m)
        {
            const std::size_t k = problem.ris_of_uav[m];
            int &n = n_elements[m];
            double p = problem.outage(m, beta, n);
            while (p < params.delta && n >= 1)
            {
                --n;
                result.assignment.n[m][k] = n;
                p = problem.outage(m, beta, n);
            }
            while (p >= params.delta)
            {
                if (result.assignment.column_sum(k) >= problem.ris_capacity[k])
                {
                    it.capacity_exhausted.push_back(m + 1);
                    break;
                }
                ++n;
                result.assignment.n[m][k] = n;
                p = problem.outage(m, beta, n);
            }
        }

        it.beta = beta;
        it.n_elements = n_elements;
        it.outage.resize(num_uavs);
        for (std::size_t m = 0; m < num_uavs; ++m)
        {
            it.outage[m] = problem.outage(m, beta, n_elements[m]);
        }
        it.max_outage = *std::max_element(it.outage.begin(), it.outage.end());
        it.total_elements = result.assignment.total();
        result.trace.iterations.push_back(std::move(it));
        result.beta = beta;

        if (previous)
        {
            double sq = 0.0;
            for (std::size_t m = 0; m < num_uavs; ++m)
            {
                sq += (beta[m] - (*previous)[m]) * (beta[m] - (*previous)[m]);
            }
            if (std::sqrt(sq) < params.eps_conv)
            {
                result.converged = true;
                break;
            }
        }
        previous = beta;
    }
    return result;
}

} // namespace risnoma
