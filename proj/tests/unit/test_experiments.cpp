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

#include "risnoma/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

using namespace risnoma;

namespace
{

using Key = std::tuple<double, int, std::size_t, LinkType>;

std::map<Key, double> by_key(const ResultTable &t)
{
    std::map<Key, double> out;
    for (const auto &r : t.rows)
    {
        out[{r.sweep_value, r.n_elements, r.uav, r.link_type}] = r.outage_analytic;
    }
    return out;
}

} // namespace

TEST_CASE("format_double is shortest round trip")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("sweep-links: shape, degenerate composite and monotone curves")
{
    const ExperimentConfig cfg;
    const ResultTable t = run_sweep_links(cfg);
    CHECK(t.rows.size() == cfg.sweep.n_elements.size() * 3 * cfg.scenario.num_uavs);
    const auto v = by_key(t);
    for (std::size_t m = 1; m <= 3; ++m)
    {
        CHECK(v.at({0.0, 0, m, LinkType::composite}) == v.at({0.0, 0, m, LinkType::direct}));
        for (std::size_t i = 1; i < cfg.sweep.n_elements.size(); ++i)
        {
            const int n0 = cfg.sweep.n_elements[i - 1];
            const int n1 = cfg.sweep.n_elements[i];
            CHECK(v.at({double(n1), n1, m, LinkType::composite}) <= v.at({double(n0), n0, m, LinkType::composite}) + 1e-12);
            CHECK(v.at({double(n1), n1, m, LinkType::direct}) == v.at({double(n0), n0, m, LinkType::direct}));
            if (n0 > 0)
            {
                CHECK(v.at({double(n1), n1, m, LinkType::ris_only}) <= v.at({double(n0), n0, m, LinkType::ris_only}) + 1e-12);
            }
        }
        const int top = cfg.sweep.n_elements.back();
        CHECK(v.at({double(top), top, m, LinkType::composite}) <= v.at({double(top), top, m, LinkType::direct}));
    }
    CHECK(to_csv(t).rfind("sweep_var,sweep_value,n_elements,uav,link_type,outage_analytic,outage_mc,mc_halfwidth\n", 0) == 0);
}

TEST_CASE("sweep-power and sweep-rate trends and consistency with sweep-links")
{
    ExperimentConfig cfg;
    cfg.sweep.n_elements = {0, 20, 60};
    cfg.sweep.tx_power_dbm = {30.0, 37.0, 40.0};
    cfg.sweep.target_rate_bpc = {0.7, 1.0, 1.5};
    const auto links = by_key(run_sweep_links(cfg));
    const auto power = by_key(run_sweep_power(cfg));
    const auto rate = by_key(run_sweep_rate(cfg));
    for (int n : cfg.sweep.n_elements)
    {
        for (std::size_t m = 1; m <= 3; ++m)
        {
            const double base = links.at({double(n), n, m, LinkType::composite});
            CHECK(power.at({37.0, n, m, LinkType::composite}) == base);
            CHECK(rate.at({1.0, n, m, LinkType::composite}) == base);
            CHECK(power.at({40.0, n, m, LinkType::composite}) <= power.at({37.0, n, m, LinkType::composite}));
            CHECK(power.at({37.0, n, m, LinkType::composite}) <= power.at({30.0, n, m, LinkType::composite}));
            CHECK(rate.at({0.7, n, m, LinkType::composite}) <= rate.at({1.0, n, m, LinkType::composite}));
            CHECK(rate.at({1.0, n, m, LinkType::composite}) <= rate.at({1.5, n, m, LinkType::composite}));
        }
    }
}

TEST_CASE("Monte Carlo columns are identical across thread counts")
{
    ExperimentConfig cfg;
    cfg.sweep.n_elements = {0, 30};
    cfg.mc.enabled = true;
    cfg.mc.config.trials = 20'000;
    cfg.mc.config.batch = 2'048;
    cfg.mc.config.threads = 1;
    const std::string serial = to_csv(run_sweep_links(cfg));
    cfg.mc.config.threads = 4;
    CHECK(to_csv(run_sweep_links(cfg)) == serial);
    CHECK(to_csv(run_sweep_links(cfg)) == serial);
    CHECK(serial.find(",,") == std::string::npos);
}

TEST_CASE("ruom report on the default scenario")
{
    ExperimentConfig cfg;
    cfg.ruom.lambdas = {0.1};
    const RuomReport report = run_ruom_report(cfg);
    REQUIRE(report.runs.size() == 1);
    REQUIRE(report.runs[0].result.has_value());
    const RuomResult &r = *report.runs[0].result;
    CHECK(r.converged);
    for (double p : r.trace.iterations.back().outage)
    {
        CHECK(p < cfg.ruom.params.delta);
    }
    CHECK(to_csv(report).rfind("lambda,t,uav,ris,outage,n_elements,beta,max_outage,total_elements,capacity_exhausted\n", 0) == 0);
    CHECK(summary_json(report, cfg.ruom.params.delta).find("\"converged\"") != std::string::npos);
}

TEST_CASE("validation passes and flags underpowered runs")
{
    ExperimentConfig cfg;
    cfg.validation.n_elements = {0, 16};
    cfg.validation.cdf_points = 9;
    cfg.mc.config.trials = 60'000;
    const ValidationReport ok = run_validation(cfg);
    CHECK(ok.passed);
    CHECK(!ok.checks.empty());
    for (const auto &c : ok.checks)
    {
        CHECK(c.bound == doctest::Approx(cfg.validation.tolerance + c.halfwidth));
        CHECK(!c.widened);
    }

    cfg.mc.config.trials = 100;
    const ValidationReport weak = run_validation(cfg);
    CHECK(std::any_of(weak.checks.begin(), weak.checks.end(), [](const ValidationCheck &c) { return c.widened; }));
}
