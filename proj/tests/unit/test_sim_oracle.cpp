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

#include "risnoma/channels.hpp"
#include "risnoma/errors.hpp"
#include "risnoma/noma.hpp"
#include "risnoma/sim_oracle.hpp"
#include "risnoma/special_math.hpp"

#include "../support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace risnoma;
using doctest::Approx;

namespace
{

Link make_link(LinkType type, double m3, double amp_d, double amp_r, int n, double m1 = 2.0, double m2 = 2.0)
{
    Link l;
    l.type = type;
    l.direct = {m3, 1.0};
    l.ris.hop_g2r = {m1, 1.0};
    l.ris.hop_r2a = {m2, 1.0};
    l.ris.n_elements = n;
    l.ris.amp_g2r = amp_r;
    l.ris.amp_r2a = 1.0;
    l.budget = make_link_budget(1.0, amp_d, amp_r);
    return l;
}

} // namespace

TEST_CASE("McConfig validation")
{
    McConfig c;
    CHECK_NOTHROW(c.validate());
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.trials = 10;
    c.batch = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("sample_nakagami: power, Rayleigh shape, moments")
{
    Rng rng = make_rng(1);
    const int n = 1'000'000;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double x = sample_nakagami(1.7, 2.5, rng);
        s2 += x * x;
    }
    CHECK(s2 / n == Approx(2.5).epsilon(0.01));

    std::vector<double> r(n);
    for (double &x : r)
    {
        x = sample_nakagami(1.0, 1.0, rng);
    }
    std::sort(r.begin(), r.end());
    CHECK(oracle::ks_distance(r, [](double x) { return 1.0 - std::exp(-x * x); }) <= 0.01);

    double m1 = 0.0;
    double m2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double x = sample_nakagami(2.5, 1.0, rng);
        m1 += x;
        m2 += x * x;
    }
    const double expected_m1 = special::gamma(3.0) / special::gamma(2.5) / std::sqrt(2.5);
    CHECK(m1 / n == Approx(expected_m1).epsilon(0.005));
    CHECK(m2 / n == Approx(1.0).epsilon(0.005));
}

TEST_CASE("sample_ris_sum: single element, mean, gamma fit")
{
    Rng rng = make_rng(2);
    RisLinkParams one;
    one.hop_g2r = {2.0, 1.0};
    one.hop_r2a = {1.5, 1.0};
    one.n_elements = 1;

    const int n = 1'000'000;
    std::vector<double> s(n);
    for (double &x : s)
    {
        x = sample_ris_sum(one, rng);
    }
    std::sort(s.begin(), s.end());
    // CDF of the product density by cumulative Simpson panels.
    const double top = s.back();
    const int panels = 4000;
    std::vector<double> xs(panels + 1);
    std::vector<double> cdf(panels + 1, 0.0);
    for (int i = 0; i <= panels; ++i)
    {
        xs[i] = top * i / panels;
    }
    for (int i = 1; i <= panels; ++i)
    {
        cdf[i] = cdf[i - 1] + oracle::integrate(
                                  [&](double x) { return x > 0.0 ? double_nakagami_pdf(one.hop_g2r, one.hop_r2a, x) : 0.0; },
                                  xs[i - 1], xs[i], 1e-12, 1);
    }
    auto table = [&](double x) {
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - xs.begin()), panels);
        const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return cdf[i - 1] + t * (cdf[i] - cdf[i - 1]);
    };
    CHECK(oracle::ks_distance(s, table) <= 0.01);

    RisLinkParams many = one;
    many.n_elements = 64;
    many.hop_r2a = {2.0, 1.0};
    std::vector<double> big(200'000);
    double sum = 0.0;
    for (double &x : big)
    {
        x = sample_ris_sum(many, rng);
        sum += x;
    }
    const LaguerreFit fit = fit_laguerre(many);
    CHECK(sum / big.size() == Approx(64.0 * double_nakagami_moment(many.hop_g2r, many.hop_r2a, 1)).epsilon(0.01));
    std::sort(big.begin(), big.end());
    CHECK(oracle::ks_distance(big, [&](double x) { return special::gamma_p(fit.a, x / fit.b); }) <= 0.02);
}

TEST_CASE("mc_snr_cdf: degenerate composite, determinism, direct closed form")
{
    const std::vector<double> grid{0.1, 0.3, 0.6, 1.0, 1.5, 2.5, 4.0};
    McConfig cfg;
    cfg.trials = 200'000;
    cfg.seed = 9;
    const Link composite0 = make_link(LinkType::composite, 2.0, 1.0, 0.05, 0);
    const Link direct = make_link(LinkType::direct, 2.0, 1.0, 0.05, 0);
    CHECK(mc_snr_cdf(composite0, grid, cfg).values == mc_snr_cdf(direct, grid, cfg).values);

    const EmpiricalCdf a = mc_snr_cdf(make_link(LinkType::composite, 1.5, 1.0, 0.05, 8), grid, cfg);
    const EmpiricalCdf b = mc_snr_cdf(make_link(LinkType::composite, 1.5, 1.0, 0.05, 8), grid, cfg);
    CHECK(a.values == b.values);
    double prev = 0.0;
    for (double v : a.values)
    {
        CHECK(v >= prev);
        CHECK(v <= 1.0);
        prev = v;
    }

    McConfig big = cfg;
    big.trials = 1'000'000;
    const EmpiricalCdf d = mc_snr_cdf(direct, grid, big);
    CHECK(d.dkw_halfwidth == Approx(std::sqrt(std::log(40.0) / 2e6)));
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        CHECK(std::fabs(d.values[i] - direct_snr_cdf(direct.direct, direct.budget.gamma_bar_d, grid[i])) <= 0.005);
    }

    const std::vector<double> unsorted{1.0, 0.5};
    CHECK_THROWS_AS(mc_snr_cdf(direct, unsorted, cfg), DomainError);
}

TEST_CASE("Monte Carlo results do not depend on the thread count")
{
    const std::vector<double> grid{0.2, 0.8, 1.6};
    McConfig serial;
    serial.trials = 100'003;
    serial.batch = 4096;
    serial.threads = 1;
    McConfig parallel = serial;
    parallel.threads = 4;
    const Link l = make_link(LinkType::composite, 1.5, 1.0, 0.03, 16);
    CHECK(mc_snr_cdf(l, grid, serial).values == mc_snr_cdf(l, grid, parallel).values);
    CHECK(mc_ordered_snr_cdf(l, 2, 3, grid, serial).values == mc_ordered_snr_cdf(l, 2, 3, grid, parallel).values);

    const std::vector<Link> links(3, l);
    const std::vector<double> beta{0.7, 0.2, 0.1};
    const std::vector<double> rates{1.0, 1.0, 1.0};
    const auto a = mc_noma_outage(links, beta, rates, serial);
    const auto b = mc_noma_outage(links, beta, rates, parallel);
    for (std::size_t m = 0; m < 3; ++m)
    {
        CHECK(a[m].outages == b[m].outages);
    }
}

TEST_CASE("mc_ordered_snr_cdf agrees with the order-statistic formula")
{
    const Link l = make_link(LinkType::direct, 1.0, 1.0, 0.0, 0);
    const std::vector<double> grid{0.2, 0.7, 1.5};
    McConfig cfg;
    cfg.trials = 300'000;
    for (std::size_t m = 1; m <= 3; ++m)
    {
        const EmpiricalCdf e = mc_ordered_snr_cdf(l, m, 3, grid, cfg);
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            CHECK(std::fabs(e.values[i] - ordered_cdf(1.0 - std::exp(-grid[i]), m, 3)) <= 0.005);
        }
    }
    CHECK_THROWS_AS(mc_ordered_snr_cdf(l, 4, 3, grid, cfg), DomainError);
}

TEST_CASE("mc_noma_outage: strong links, single-user Rayleigh, infeasibility")
{
    McConfig cfg;
    cfg.trials = 200'000;
    const std::vector<double> beta{0.7, 0.2, 0.1};
    const std::vector<double> rates{1.0, 1.0, 1.0};
    const std::vector<Link> strong(3, make_link(LinkType::direct, 2.0, 1e4, 0.0, 0));
    for (const auto &e : mc_noma_outage(strong, beta, rates, cfg))
    {
        CHECK(e.outages == 0);
    }

    const std::vector<Link> single{make_link(LinkType::direct, 1.0, std::sqrt(10.0), 0.0, 0)};
    const std::vector<double> one{1.0};
    const std::vector<double> r1{1.0};
    const auto est = mc_noma_outage(single, one, r1, cfg);
    CHECK(std::fabs(est[0].value - (1.0 - std::exp(-0.1))) <= 0.005);
    CHECK(est[0].halfwidth > 0.0);

    const std::vector<double> bad{0.5, 0.3, 0.2};
    CHECK_THROWS_AS(mc_noma_outage(strong, bad, rates, cfg), InfeasibleAllocation);
}

TEST_CASE("confidence half-widths")
{
    CHECK(dkw_halfwidth(1'000'000) == Approx(0.001358).epsilon(1e-3));
    CHECK(wilson_halfwidth(0, 1000) > 0.0);
    CHECK(wilson_halfwidth(500, 1000) == Approx(0.0309).epsilon(0.01));
    CHECK(wilson_halfwidth(50, 100) > wilson_halfwidth(5000, 10000));
}
