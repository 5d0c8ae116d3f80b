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

#include "doctest.h"

#include "risnoma/errors.hpp"
#include "risnoma/noma.hpp"
#include "risnoma/rng.hpp"
#include "risnoma/ruom.hpp"

#include "../support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace risnoma;
using doctest::Approx;

namespace
{

// Rayleigh users whose mean SNR grows with the element count; a stand-in for the
// full link model with the same monotone structure.
RuomProblem rayleigh_problem(std::vector<double> rates, double base_snr, double per_element, std::vector<int> caps,
                             std::vector<std::size_t> ris_of_uav)
{
    RuomProblem p;
    p.rates = rates;
    p.ris_of_uav = std::move(ris_of_uav);
    p.ris_capacity = std::move(caps);
    const std::size_t total = rates.size();
    p.outage = [rates, base_snr, per_element, total](std::size_t m, std::span<const double> beta, int n) {
        const double mean = base_snr * (1.0 + per_element * n) * (1.0 + per_element * n);
        OutageQuery q;
        q.rank = m + 1;
        q.total = total;
        q.parent_cdf = [mean](double g) { return 1.0 - std::exp(-g / mean); };
        q.target_rates = rates;
        return outage_probability(q, beta, OutageMode::lenient);
    };
    return p;
}

bool strictly_feasible(const std::vector<double> &beta, const std::vector<double> &rates)
{
    double tail = 0.0;
    for (std::size_t j = beta.size(); j-- > 0;)
    {
        if (!((std::exp2(rates[j]) - 1.0) * tail < beta[j]))
        {
            return false;
        }
        tail += beta[j];
    }
    return true;
}

} // namespace

TEST_CASE("pgs: small worked cases")
{
    const std::vector<double> rates{1.0, 1.0};
    CHECK(pgs(std::nullopt, 0.5, rates, 2).empty());

    const auto quarter = pgs(std::nullopt, 0.25, rates, 2);
    REQUIRE(quarter.size() == 1);
    CHECK(quarter[0][0] == Approx(0.75));
    CHECK(quarter[0][1] == Approx(0.25));

    const std::vector<double> prior{0.71234, 0.28766};
    const auto local = pgs(prior, 0.1, rates, 2);
    CHECK(std::find(local.begin(), local.end(), prior) != local.end());
    for (const auto &b : local)
    {
        CHECK(std::fabs(b[0] - prior[0]) <= 0.1 + 1e-12);
    }

    const auto anchored = pgs(prior, 0.01, rates, 2, true);
    CHECK(std::find(anchored.begin(), anchored.end(), prior) != anchored.end());
    for (const auto &b : anchored)
    {
        CHECK((std::fabs(b[0] - prior[0]) < 1e-12 || std::fabs(std::fabs(b[0] - prior[0]) - 0.01) < 1e-12));
    }

    CHECK_THROWS_AS(pgs(std::nullopt, 0.0, rates, 2), DomainError);
    CHECK_THROWS_AS(pgs(std::nullopt, 0.1, rates, 3), DomainError);
}

TEST_CASE("pgs matches integer enumeration of the grid")
{
    for (int parts : {2, 3, 4})
    {
        for (int k : {2, 4, 10, 20})
        {
            for (double rate : {0.5, 1.0, 1.5})
            {
                const std::vector<double> rates(static_cast<std::size_t>(parts), rate);
                const auto got = pgs(std::nullopt, 1.0 / k, rates, static_cast<std::size_t>(parts));
                const auto want = oracle::feasible_compositions(k, parts, rate);
                REQUIRE(got.size() == want.size());
                for (std::size_t i = 0; i < got.size(); ++i)
                {
                    for (int d = 0; d < parts; ++d)
                    {
                        CHECK(got[i][d] == Approx(static_cast<double>(want[i][d]) / k).epsilon(1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("pgs properties on random inputs")
{
    Rng rng = make_rng(77);
    std::uniform_real_distribution<double> rate_dist(0.1, 1.5);
    std::uniform_int_distribution<int> m_dist(1, 4);
    for (int trial = 0; trial < 40; ++trial)
    {
        const auto m = static_cast<std::size_t>(m_dist(rng));
        std::vector<double> rates(m);
        for (double &r : rates)
        {
            r = rate_dist(rng);
        }
        const double eps = trial % 2 == 0 ? 0.1 : 0.05;
        const auto out = pgs(std::nullopt, eps, rates, m);
        CHECK(std::is_sorted(out.begin(), out.end()));
        CHECK(std::adjacent_find(out.begin(), out.end()) == out.end());
        for (const auto &b : out)
        {
            CHECK(std::accumulate(b.begin(), b.end(), 0.0) == Approx(1.0).epsilon(1e-9));
            CHECK(strictly_feasible(b, rates));
        }
        if (!out.empty())
        {
            const auto &prior = out[out.size() / 2];
            const auto local = pgs(prior, eps * 0.1, rates, m);
            CHECK(std::find(local.begin(), local.end(), prior) != local.end());
            for (const auto &b : local)
            {
                CHECK(strictly_feasible(b, rates));
                for (std::size_t d = 0; d < m; ++d)
                {
                    CHECK(std::fabs(b[d] - prior[d]) <= eps * 0.1 + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("RuomParams refinement count and validation")
{
    RuomParams p;
    CHECK(p.refinements() == 7);
    p.lambda = 0.5;
    CHECK(p.refinements() == 24);
    p.lambda = 0.9;
    CHECK(p.refinements() == 153);
    p.lambda = 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = RuomParams{};
    p.eps_ac = 0.2;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("evaluate_candidates: singleton, dominance, ties, thread invariance")
{
    RuomProblem p = rayleigh_problem({1.0, 1.0}, 50.0, 0.0, {10}, {0, 0});
    const std::vector<int> n{0, 0};
    const std::vector<std::vector<double>> single{{0.8, 0.2}};
    CHECK(evaluate_candidates(single, p, n).beta == single[0]);

    // Rank 1 is the bottleneck, so more power on it lowers the maximum.
    const std::vector<std::vector<double>> two{{0.7, 0.3}, {0.8, 0.2}};
    const CandidateScore s = evaluate_candidates(two, p, n);
    CHECK(s.max_outage == *std::max_element(s.outage.begin(), s.outage.end()));

    RuomProblem flat = p;
    flat.outage = [](std::size_t, std::span<const double>, int) { return 0.25; };
    const std::vector<std::vector<double>> tied{{0.9, 0.1}, {0.7, 0.3}, {0.8, 0.2}};
    CHECK(evaluate_candidates(tied, flat, n).beta == tied[1]);

    const std::vector<double> rates{0.5, 0.5, 0.5};
    RuomProblem three = rayleigh_problem(rates, 30.0, 0.0, {10}, {0, 0, 0});
    const std::vector<int> n3{0, 0, 0};
    auto cands = pgs(std::nullopt, 0.02, rates, 3);
    REQUIRE(cands.size() >= 100);
    cands.resize(100);
    const CandidateScore a = evaluate_candidates(cands, three, n3, 1);
    const CandidateScore b = evaluate_candidates(cands, three, n3, 4);
    CHECK(a.beta == b.beta);
    CHECK(a.max_outage == b.max_outage);
    for (const auto &c : cands)
    {
        double worst = 0.0;
        for (std::size_t m = 0; m < 3; ++m)
        {
            worst = std::max(worst, three.outage(m, c, 0));
        }
        CHECK(a.max_outage <= worst);
    }

    const std::vector<std::vector<double>> none;
    CHECK_THROWS_AS(evaluate_candidates(none, p, n), DomainError);
}

TEST_CASE("fairness_search reaches the brute-force minimax for two users")
{
    const std::vector<double> rates{1.0, 1.0};
    RuomProblem p = rayleigh_problem(rates, 40.0, 0.0, {10}, {0, 0});
    const std::vector<int> n{0, 0};
    RuomParams params;
    params.eps_ac = 1e-3;
    const FairnessResult r = fairness_search(p, n, params);
    REQUIRE(r.refinement_max_outage.size() == 2);
    CHECK(r.refinement_max_outage[1] <= r.refinement_max_outage[0]);

    double brute = 1.0;
    for (int k = 1; k < 1000; ++k)
    {
        const std::vector<double> beta{1.0 - k / 1000.0, k / 1000.0};
        if (strictly_feasible(beta, rates))
        {
            brute = std::min(brute, std::max(p.outage(0, beta, 0), p.outage(1, beta, 0)));
        }
    }
    CHECK(r.best.max_outage == Approx(brute).epsilon(1e-12));
}

TEST_CASE("ruom: single user with abundant SNR")
{
    RuomProblem p = rayleigh_problem({1.0}, 1e6, 0.1, {50}, {0});
    const RuomResult r = ruom(p, RuomParams{});
    REQUIRE(r.beta.size() == 1);
    CHECK(r.beta[0] == 1.0);
    CHECK(r.assignment.total() == 0);
    CHECK(r.converged);
    CHECK(r.trace.iterations.size() == 2);
}

TEST_CASE("ruom: element trimming, trace monotonicity and local optimality")
{
    const std::vector<double> rates{1.0, 1.0, 1.0};
    RuomProblem p = rayleigh_problem(rates, 2.0, 0.5, {400, 400}, {0, 1, 0});
    RuomParams params;
    const RuomResult r = ruom(p, params);
    REQUIRE(r.converged);
    REQUIRE(!r.trace.iterations.empty());
    const RuomIteration &last = r.trace.iterations.back();
    CHECK(last.capacity_exhausted.empty());
    CHECK(last.total_elements <= r.trace.iterations.front().total_elements);
    CHECK(strictly_feasible(r.beta, rates));
    CHECK(r.beta[0] > r.beta[1]);
    CHECK(r.beta[1] > r.beta[2]);
    for (const auto &it : r.trace.iterations)
    {
        for (std::size_t i = 1; i < it.refinement_max_outage.size(); ++i)
        {
            CHECK(it.refinement_max_outage[i] <= it.refinement_max_outage[i - 1]);
        }
    }
    for (std::size_t m = 0; m < 3; ++m)
    {
        const int n = last.n_elements[m];
        CHECK(last.outage[m] < params.delta);
        CHECK(r.assignment.n[m][p.ris_of_uav[m]] == n);
        CHECK((n == 0 || p.outage(m, r.beta, n - 1) >= params.delta));
    }
}

TEST_CASE("ruom: capacity exhaustion is reported")
{
    RuomProblem p = rayleigh_problem({1.0, 1.0}, 0.5, 0.1, {3}, {0, 0});
    const RuomResult r = ruom(p, RuomParams{});
    const RuomIteration &last = r.trace.iterations.back();
    CHECK(!last.capacity_exhausted.empty());
    CHECK(r.assignment.column_sum(0) == 3);
    CHECK(last.max_outage >= 1e-3);
}

TEST_CASE("ruom: no feasible vector on the coarsest grid")
{
    RuomProblem p = rayleigh_problem({3.0, 3.0, 3.0}, 10.0, 0.1, {10}, {0, 0, 0});
    CHECK_THROWS_AS(ruom(p, RuomParams{}), NoFeasibleAllocation);
}
