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

#ifndef RISNOMA_SIM_ORACLE_HPP
#define RISNOMA_SIM_ORACLE_HPP

#include "risnoma/channels.hpp"
#include "risnoma/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// Monte Carlo reference for the closed-form distributions and the NOMA outage.
//
// Trials are split into fixed-size batches; batch b draws from its own generator
// seeded with derive_seed(seed, b) and contributes integer counts, so estimates
// are identical for any thread count.
namespace risnoma
{

struct McConfig
{
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    std::uint64_t batch = 1 << 15;
    unsigned threads = 0; ///< 0 = hardware concurrency

    void validate() const;

    friend bool operator==(const McConfig &, const McConfig &) = default;
};

/// Nakagami-m amplitude: sqrt of a Gamma(m, omega/m) power draw.
double sample_nakagami(double m, double omega, Rng &rng);

/// Phase-aligned element sum S = sum_i G_i^g G_i^a (unit large-scale gain).
double sample_ris_sum(const RisLinkParams &ris, Rng &rng);

/// Draws instantaneous SNRs of one link.
class LinkSampler
{
  public:
    explicit LinkSampler(const Link &link);

    double operator()(Rng &rng);

  private:
    Link link_;
    double sqrt_gbar_d_;
    double sqrt_gbar_r_;
    std::gamma_distribution<double> direct_;
    std::gamma_distribution<double> g2r_;
    std::gamma_distribution<double> r2a_;
};

struct EmpiricalCdf
{
    std::vector<double> grid;
    std::vector<double> values;
    double dkw_halfwidth = 0.0; ///< 95% uniform band
    std::uint64_t trials = 0;
};

/// Empirical SNR CDF on an ascending grid.
EmpiricalCdf mc_snr_cdf(const Link &link, std::span<const double> grid, const McConfig &cfg);

/// Empirical CDF of the rank-th smallest of `total` i.i.d. SNR draws.
EmpiricalCdf mc_ordered_snr_cdf(const Link &link, std::size_t rank, std::size_t total, std::span<const double> grid,
                                const McConfig &cfg);

struct OutageEstimate
{
    double value = 0.0;
    double halfwidth = 0.0; ///< 95% Wilson half-width
    std::uint64_t outages = 0;
    std::uint64_t trials = 0;
};

/// Event-level NOMA outage for every rank. For rank m, each trial draws M i.i.d.
/// SNRs from links[m-1], takes the m-th smallest, and declares success when
/// R_{m,j} > R_j for every j <= m. `links` is indexed by rank - 1.
std::vector<OutageEstimate> mc_noma_outage(std::span<const Link> links, std::span<const double> beta,
                                           std::span<const double> rates, const McConfig &cfg);

double dkw_halfwidth(std::uint64_t trials, double confidence = 0.95);
double wilson_halfwidth(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

} // namespace risnoma

#endif
