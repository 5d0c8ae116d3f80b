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

#include "risnoma/sim_oracle.hpp"

#include "risnoma/errors.hpp"
#include "risnoma/noma.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <string>
#include <thread>

namespace risnoma
{

void McConfig::validate() const
{
    if (trials < 1)
    {
        throw ConfigError("mc.trials must be >= 1");
    }
    if (batch < 1)
    {
        throw ConfigError("mc.batch must be >= 1");
    }
}

double sample_nakagami(double m, double omega, Rng &rng)
{
    std::gamma_distribution<double> power(m, omega / m);
    return std::sqrt(power(rng));
}

double sample_ris_sum(const RisLinkParams &ris, Rng &rng)
{
    std::gamma_distribution<double> g2r(ris.hop_g2r.m, ris.hop_g2r.omega / ris.hop_g2r.m);
    std::gamma_distribution<double> r2a(ris.hop_r2a.m, ris.hop_r2a.omega / ris.hop_r2a.m);
    double sum = 0.0;
    for (int i = 0; i < ris.n_elements; ++i)
    {
        sum += std::sqrt(g2r(rng) * r2a(rng));
    }
    return sum;
}

LinkSampler::LinkSampler(const Link &link)
    : link_(link), sqrt_gbar_d_(std::sqrt(link.budget.gamma_bar_d)), sqrt_gbar_r_(std::sqrt(link.budget.gamma_bar_r)),
      direct_(link.direct.m, link.direct.omega / link.direct.m),
      g2r_(link.ris.hop_g2r.m, link.ris.hop_g2r.omega / link.ris.hop_g2r.m),
      r2a_(link.ris.hop_r2a.m, link.ris.hop_r2a.omega / link.ris.hop_r2a.m)
{
    link.direct.validate();
    link.ris.hop_g2r.validate();
    link.ris.hop_r2a.validate();
}

double LinkSampler::operator()(Rng &rng)
{
    double amplitude = 0.0;
    if (link_.type != LinkType::direct && link_.ris.n_elements > 0)
    {
        double sum = 0.0;
        for (int i = 0; i < link_.ris.n_elements; ++i)
        {
            sum += std::sqrt(g2r_(rng) * r2a_(rng));
        }
        amplitude += sqrt_gbar_r_ * sum;
    }
    if (link_.type != LinkType::ris_only)
    {
        amplitude += sqrt_gbar_d_ * std::sqrt(direct_(rng));
    }
    return amplitude * amplitude;
}

namespace
{

using BatchFn = std::function<void(Rng &, std::uint64_t, std::vector<std::uint64_t> &)>;

// Runs every batch with its own derived generator and sums the integer counters
// in batch order.
std::vector<std::uint64_t> run_batches(const McConfig &cfg, std::size_t counters, const BatchFn &fn)
{
    cfg.validate();
    const std::uint64_t n_batches = (cfg.trials + cfg.batch - 1) / cfg.batch;
    std::vector<std::vector<std::uint64_t>> per_batch(n_batches, std::vector<std::uint64_t>(counters, 0));

    auto work = [&](std::uint64_t b) {
        Rng rng = make_rng(cfg.seed, b);
        const std::uint64_t count = std::min(cfg.batch, cfg.trials - b * cfg.batch);
        fn(rng, count, per_batch[b]);
    };

    unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_batches));
    if (threads <= 1)
    {
        for (std::uint64_t b = 0; b < n_batches; ++b)
        {
            work(b);
        }
    }
    else
    {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
        {
            pool.emplace_back([&] {
                for (std::uint64_t b = next++; b < n_batches; b = next++)
                {
                    work(b);
                }
            });
        }
    }

    std::vector<std::uint64_t> total(counters, 0);
    for (const auto &counts : per_batch)
    {
        for (std::size_t i = 0; i < counters; ++i)
        {
            total[i] += counts[i];
        }
    }
    return total;
}

void check_grid(std::span<const double> grid)
{
    if (!std::is_sorted(grid.begin(), grid.end()))
    {
        throw DomainError("Monte Carlo grid must be sorted ascending");
    }
}

// bins[i] counts draws falling in (grid[i-1], grid[i]]; the last bin holds the
// rest. Prefix sums give the empirical CDF.
EmpiricalCdf to_cdf(std::span<const double> grid, const std::vector<std::uint64_t> &bins, std::uint64_t trials)
{
    EmpiricalCdf out;
    out.grid.assign(grid.begin(), grid.end());
    out.values.resize(grid.size());
    std::uint64_t running = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        running += bins[i];
        out.values[i] = static_cast<double>(running) / static_cast<double>(trials);
    }
    out.trials = trials;
    out.dkw_halfwidth = dkw_halfwidth(trials);
    return out;
}

void bin_sample(std::span<const double> grid, double x, std::vector<std::uint64_t> &bins)
{
    const auto it = std::lower_bound(grid.begin(), grid.end(), x);
    ++bins[static_cast<std::size_t>(it - grid.begin())];
}

} // namespace

double dkw_halfwidth(std::uint64_t trials, double confidence)
{
    return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(trials)));
}

double wilson_halfwidth(std::uint64_t successes, std::uint64_t trials, double z)
{
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    return z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
}

EmpiricalCdf mc_snr_cdf(const Link &link, std::span<const double> grid, const McConfig &cfg)
{
    check_grid(grid);
    const LinkSampler prototype(link);
    const auto bins = run_batches(cfg, grid.size() + 1, [&](Rng &rng, std::uint64_t n, std::vector<std::uint64_t> &c) {
        LinkSampler sample = prototype;
        for (std::uint64_t t = 0; t < n; ++t)
        {
            bin_sample(grid, sample(rng), c);
        }
    });
    return to_cdf(grid, bins, cfg.trials);
}

EmpiricalCdf mc_ordered_snr_cdf(const Link &link, std::size_t rank, std::size_t total, std::span<const double> grid,
                                const McConfig &cfg)
{
    check_grid(grid);
    if (rank < 1 || rank > total)
    {
        throw DomainError("mc_ordered_snr_cdf: rank outside [1, total]");
    }
    const LinkSampler prototype(link);
    const auto bins = run_batches(cfg, grid.size() + 1, [&](Rng &rng, std::uint64_t n, std::vector<std::uint64_t> &c) {
        LinkSampler sample = prototype;
        std::vector<double> draws(total);
        for (std::uint64_t t = 0; t < n; ++t)
        {
            for (double &d : draws)
            {
                d = sample(rng);
            }
            std::sort(draws.begin(), draws.end());
            bin_sample(grid, draws[rank - 1], c);
        }
    });
    return to_cdf(grid, bins, cfg.trials);
}

std::vector<OutageEstimate> mc_noma_outage(std::span<const Link> links, std::span<const double> beta,
                                           std::span<const double> rates, const McConfig &cfg)
{
    const std::size_t total = beta.size();
    if (links.size() != total || rates.size() != total)
    {
        throw DomainError("mc_noma_outage: links, beta and rates must have one entry per UAV");
    }
    if (const std::size_t j = first_infeasible_rank(beta, rates, total); j != 0)
    {
        throw InfeasibleAllocation(j, "mc_noma_outage: SIC constraint violated at rank " + std::to_string(j));
    }

    std::vector<OutageEstimate> out;
    out.reserve(total);
    for (std::size_t rank = 1; rank <= total; ++rank)
    {
        const LinkSampler prototype(links[rank - 1]);
        McConfig rank_cfg = cfg;
        rank_cfg.seed = derive_seed(cfg.seed, 0xa11ce000 + rank);
        const auto counts = run_batches(rank_cfg, 1, [&](Rng &rng, std::uint64_t n, std::vector<std::uint64_t> &c) {
            LinkSampler sample = prototype;
            std::vector<double> draws(total);
            for (std::uint64_t t = 0; t < n; ++t)
            {
                for (double &d : draws)
                {
                    d = sample(rng);
                }
                std::nth_element(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(rank - 1), draws.end());
                const double snr = draws[rank - 1];
                bool decoded = true;
                for (std::size_t j = 1; j <= rank && decoded; ++j)
                {
                    decoded = decode_rate(snr, beta, rank, j) > rates[j - 1];
                }
                if (!decoded)
                {
                    ++c[0];
                }
            }
        });
        OutageEstimate e;
        e.outages = counts[0];
        e.trials = cfg.trials;
        e.value = static_cast<double>(e.outages) / static_cast<double>(e.trials);
        e.halfwidth = wilson_halfwidth(e.outages, e.trials);
        out.push_back(e);
    }
    return out;
}

} // namespace risnoma
