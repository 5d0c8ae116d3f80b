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

#include "risnoma/experiments.hpp"

#include "risnoma/errors.hpp"
#include "risnoma/noma.hpp"
#include "risnoma/rng.hpp"
#include "risnoma/sim_oracle.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace risnoma
{

namespace
{

using json = nlohmann::json;

constexpr std::array kAllLinkTypes{LinkType::direct, LinkType::ris_only, LinkType::composite};

const std::vector<double> &fixed_beta(const ExperimentConfig &cfg)
{
    if (!cfg.noma.beta)
    {
        throw ConfigError("noma.beta must be a fixed vector for sweep runs");
    }
    return *cfg.noma.beta;
}

McConfig mc_for(const ExperimentConfig &cfg, std::uint64_t stream)
{
    McConfig mc = cfg.mc.config;
    mc.seed = derive_seed(cfg.seed, stream);
    return mc;
}

std::vector<Link> links_of(const std::vector<UavLinks> &links, LinkType type, int n)
{
    std::vector<Link> out;
    out.reserve(links.size());
    for (const auto &l : links)
    {
        out.push_back(l.link(type, n));
    }
    return out;
}

// Appends one row per rank for a single (type, N) point.
void append_point(ResultTable &table, const ExperimentConfig &cfg, const std::vector<UavLinks> &links,
                  const std::string &var, double value, LinkType type, int n, std::span<const double> beta,
                  std::span<const double> rates, std::uint64_t stream)
{
    const std::size_t total = links.size();
    std::vector<OutageEstimate> mc;
    if (cfg.mc.enabled)
    {
        mc = mc_noma_outage(links_of(links, type, n), beta, rates, mc_for(cfg, stream));
    }
    for (std::size_t m = 0; m < total; ++m)
    {
        ResultRow row;
        row.sweep_var = var;
        row.sweep_value = value;
        row.n_elements = n;
        row.uav = links[m].rank;
        row.link_type = type;
        row.outage_analytic = uav_outage(links[m], total, type, n, beta, rates, cfg.channel.composite_method);
        if (!mc.empty())
        {
            row.outage_mc = mc[m].value;
            row.mc_halfwidth = mc[m].halfwidth;
        }
        table.rows.push_back(std::move(row));
    }
}

std::string optional_field(const std::optional<double> &v)
{
    return v ? format_double(*v) : std::string();
}

} // namespace

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

SystemModel build_system(const ExperimentConfig &cfg)
{
    SystemModel sys;
    sys.scenario = generate_scenario(cfg.scenario, cfg.seed);
    sys.links = resolve_links(sys.scenario, cfg.environment, cfg.channel);
    return sys;
}

ResultTable run_sweep_links(const ExperimentConfig &cfg)
{
    const auto &beta = fixed_beta(cfg);
    const SystemModel sys = build_system(cfg);
    const auto &rates = cfg.scenario.target_rates_bpc;
    ResultTable table;
    std::uint64_t stream = 0;
    for (int n : cfg.sweep.n_elements)
    {
        for (LinkType type : kAllLinkTypes)
        {
            append_point(table, cfg, sys.links, "n_elements", n, type, n, beta, rates, stream++);
        }
    }
    return table;
}

ResultTable run_sweep_power(const ExperimentConfig &cfg)
{
    const auto &beta = fixed_beta(cfg);
    const auto &rates = cfg.scenario.target_rates_bpc;
    SystemModel sys = build_system(cfg);
    ResultTable table;
    std::uint64_t stream = 0;
    for (double p : cfg.sweep.tx_power_dbm)
    {
        sys.scenario.tx_power_dbm = p;
        const auto links = resolve_links(sys.scenario, cfg.environment, cfg.channel);
        for (int n : cfg.sweep.n_elements)
        {
            append_point(table, cfg, links, "tx_power_dbm", p, LinkType::composite, n, beta, rates, stream++);
        }
    }
    return table;
}

ResultTable run_sweep_rate(const ExperimentConfig &cfg)
{
    const auto &beta = fixed_beta(cfg);
    const SystemModel sys = build_system(cfg);
    ResultTable table;
    std::uint64_t stream = 0;
    for (double r : cfg.sweep.target_rate_bpc)
    {
        const std::vector<double> rates(sys.links.size(), r);
        for (int n : cfg.sweep.n_elements)
        {
            append_point(table, cfg, sys.links, "target_rate_bpc", r, LinkType::composite, n, beta, rates,
                         stream++);
        }
    }
    return table;
}

std::string to_csv(const ResultTable &table)
{
    std::ostringstream out;
    out << "sweep_var,sweep_value,n_elements,uav,link_type,outage_analytic,outage_mc,mc_halfwidth\n";
    for (const auto &r : table.rows)
    {
        out << r.sweep_var << ',' << format_double(r.sweep_value) << ',' << r.n_elements << ',' << r.uav << ','
            << to_string(r.link_type) << ',' << format_double(r.outage_analytic) << ',' << optional_field(r.outage_mc)
            << ',' << optional_field(r.mc_halfwidth) << '\n';
    }
    return out.str();
}

std::string to_json(const ResultTable &table)
{
    json rows = json::array();
    for (const auto &r : table.rows)
    {
        rows.push_back({{"sweep_var", r.sweep_var},
                        {"sweep_value", r.sweep_value},
                        {"n_elements", r.n_elements},
                        {"uav", r.uav},
                        {"link_type", std::string(to_string(r.link_type))},
                        {"outage_analytic", r.outage_analytic},
                        {"outage_mc", r.outage_mc ? json(*r.outage_mc) : json(nullptr)},
                        {"mc_halfwidth", r.mc_halfwidth ? json(*r.mc_halfwidth) : json(nullptr)}});
    }
    return rows.dump(2) + "\n";
}

RuomReport run_ruom_report(const ExperimentConfig &cfg)
{
    const SystemModel sys = build_system(cfg);
    const auto &links = sys.links;
    const std::size_t total = links.size();
    const auto method = cfg.channel.composite_method;

    RuomProblem problem;
    problem.rates = cfg.scenario.target_rates_bpc;
    for (const auto &l : links)
    {
        problem.ris_of_uav.push_back(l.best_ris);
    }
    for (const auto &site : sys.scenario.riss)
    {
        problem.ris_capacity.push_back(site.max_elements);
    }
    problem.outage = [&links, total, method, rates = problem.rates](std::size_t m, std::span<const double> beta,
                                                                    int n) {
        return uav_outage(links[m], total, LinkType::composite, n, beta, rates, method);
    };

    RuomReport report;
    report.ris_of_uav = problem.ris_of_uav;
    for (double lambda : cfg.ruom.lambdas)
    {
        RuomParams params = cfg.ruom.params;
        params.lambda = lambda;
        RuomRun run;
        run.lambda = lambda;
        try
        {
            run.result = ruom(problem, params);
        }
        catch (const NoFeasibleAllocation &e)
        {
            run.error = e.what();
            report.any_infeasible = true;
        }
        report.runs.push_back(std::move(run));
    }
    return report;
}

std::string to_csv(const RuomReport &report)
{
    std::ostringstream out;
    out << "lambda,t,uav,ris,outage,n_elements,beta,max_outage,total_elements,capacity_exhausted\n";
    for (const auto &run : report.runs)
    {
        if (!run.result)
        {
            continue;
        }
        for (const auto &it : run.result->trace.iterations)
        {
            for (std::size_t m = 0; m < it.beta.size(); ++m)
            {
                const bool exhausted = std::find(it.capacity_exhausted.begin(), it.capacity_exhausted.end(), m + 1) !=
                                       it.capacity_exhausted.end();
                out << format_double(run.lambda) << ',' << it.t << ',' << m + 1 << ',' << report.ris_of_uav[m] << ','
                    << format_double(it.outage[m]) << ',' << it.n_elements[m] << ',' << format_double(it.beta[m])
                    << ',' << format_double(it.max_outage) << ',' << it.total_elements << ','
                    << (exhausted ? 1 : 0) << '\n';
            }
        }
    }
    return out.str();
}

std::string summary_json(const RuomReport &report, double delta)
{
    json runs = json::array();
    for (const auto &run : report.runs)
    {
        json j;
        j["lambda"] = run.lambda;
        if (!run.result)
        {
            j["error"] = run.error;
            runs.push_back(j);
            continue;
        }
        const auto &iters = run.result->trace.iterations;
        const auto &first = iters.front();
        const auto &last = iters.back();
        j["converged"] = run.result->converged;
        j["iterations"] = last.t;
        j["beta"] = last.beta;
        j["n_elements"] = last.n_elements;
        j["outage"] = last.outage;
        j["max_outage"] = last.max_outage;
        j["all_below_delta"] = last.max_outage < delta;
        j["total_elements_first"] = first.total_elements;
        j["total_elements_final"] = last.total_elements;
        j["capacity_exhausted"] = last.capacity_exhausted;
        runs.push_back(j);
    }
    json root;
    root["delta"] = delta;
    root["ris_of_uav"] = report.ris_of_uav;
    root["runs"] = runs;
    return root.dump(2) + "\n";
}

namespace
{

// Smallest SNR (to bisection precision) whose analytic CDF reaches q.
double analytic_quantile(const Link &link, CompositeMethod method, double q)
{
    double hi = 1.0;
    for (int i = 0; i < 400 && link_snr_cdf(link, hi, method) < q; ++i)
    {
        hi *= 2.0;
    }
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (link_snr_cdf(link, mid, method) < q ? lo : hi) = mid;
    }
    return hi;
}

void finish_check(ValidationCheck &c, double tolerance)
{
    c.bound = tolerance + c.halfwidth;
    c.widened = c.halfwidth > tolerance;
    c.passed = c.skipped || std::fabs(c.analytic - c.mc) <= c.bound;
}

} // namespace

ValidationReport run_validation(const ExperimentConfig &cfg)
{
    const auto &beta = fixed_beta(cfg);
    const SystemModel sys = build_system(cfg);
    const auto &links = sys.links;
    const auto &rates = cfg.scenario.target_rates_bpc;
    const auto method = cfg.channel.composite_method;
    const double tol = cfg.validation.tolerance;

    struct Point
    {
        LinkType type;
        int n;
    };
    std::vector<Point> points{{LinkType::direct, 0}};
    for (int n : cfg.validation.n_elements)
    {
        if (n > 0)
        {
            points.push_back({LinkType::ris_only, n});
            points.push_back({LinkType::composite, n});
        }
    }

    ValidationReport report;
    std::uint64_t stream = 0x7a11da7e00000000ULL;
    for (const Point &pt : points)
    {
        const auto point_links = links_of(links, pt.type, pt.n);
        for (std::size_t m = 0; m < links.size(); ++m)
        {
            std::vector<double> grid;
            const int k = cfg.validation.cdf_points;
            for (int i = 1; i <= k; ++i)
            {
                grid.push_back(analytic_quantile(point_links[m], method, static_cast<double>(i) / (k + 1)));
            }
            std::sort(grid.begin(), grid.end());
            const EmpiricalCdf emp = mc_snr_cdf(point_links[m], grid, mc_for(cfg, stream++));
            for (std::size_t i = 0; i < grid.size(); ++i)
            {
                ValidationCheck c;
                c.kind = "cdf";
                c.uav = links[m].rank;
                c.link_type = pt.type;
                c.n_elements = pt.n;
                c.point = grid[i];
                c.analytic = link_snr_cdf(point_links[m], grid[i], method);
                c.mc = emp.values[i];
                c.halfwidth = emp.dkw_halfwidth;
                finish_check(c, tol);
                report.checks.push_back(c);
            }
        }

        const auto outage = mc_noma_outage(point_links, beta, rates, mc_for(cfg, stream++));
        for (std::size_t m = 0; m < links.size(); ++m)
        {
            ValidationCheck c;
            c.kind = "outage";
            c.uav = links[m].rank;
            c.link_type = pt.type;
            c.n_elements = pt.n;
            c.analytic = uav_outage(links[m], links.size(), pt.type, pt.n, beta, rates, method);
            c.mc = outage[m].value;
            c.halfwidth = outage[m].halfwidth;
            c.skipped = c.analytic < cfg.validation.min_outage;
            finish_check(c, tol);
            report.checks.push_back(c);
        }
    }
    report.passed = std::all_of(report.checks.begin(), report.checks.end(), [](const auto &c) { return c.passed; });
    return report;
}

std::string to_csv(const ValidationReport &report)
{
    std::ostringstream out;
    out << "kind,uav,link_type,n_elements,point,analytic,mc,halfwidth,bound,widened,skipped,passed\n";
    for (const auto &c : report.checks)
    {
        out << c.kind << ',' << c.uav << ',' << to_string(c.link_type) << ',' << c.n_elements << ','
            << format_double(c.point) << ',' << format_double(c.analytic) << ',' << format_double(c.mc) << ','
            << format_double(c.halfwidth) << ',' << format_double(c.bound) << ',' << c.widened << ',' << c.skipped
            << ',' << c.passed << '\n';
    }
    return out.str();
}

void write_file(const std::filesystem::path &dir, const std::string &name, const std::string &content)
{
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw std::runtime_error("cannot write " + (dir / name).string());
    }
    out << content;
}

void write_manifest(const std::filesystem::path &dir, const ExperimentConfig &cfg, const std::string &subcommand,
                    const std::vector<std::string> &files)
{
    json j;
    j["tool"] = "risnoma";
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["seed"] = cfg.seed;
    j["files"] = files;
    j["config"] = json::parse(serialize_config(cfg));
    write_file(dir, "manifest.json", j.dump(2) + "\n");
}

} // namespace risnoma
