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

#ifndef RISNOMA_SYSTEM_HPP
#define RISNOMA_SYSTEM_HPP

#include "risnoma/channels.hpp"
#include "risnoma/environment.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace risnoma
{

/// Fading spreads and optional shape overrides. Absent shapes are derived from
/// each hop's LoS probability.
struct ChannelOptions
{
    double omega_g2r = 1.0;
    double omega_r2a = 1.0;
    double omega_direct = 1.0;
    std::optional<double> m_g2r;
    std::optional<double> m_r2a;
    std::optional<double> m_direct;
    CompositeMethod composite_method = CompositeMethod::closed_form;

    friend bool operator==(const ChannelOptions &, const ChannelOptions &) = default;
};

/// Large-scale and fading parameters of one UAV's three candidate links.
struct UavLinks
{
    std::size_t uav_index = 0; ///< position in Scenario::uavs
    std::size_t rank = 1;      ///< NOMA rank, 1 = weakest mean direct SNR
    std::size_t best_ris = 0;
    NakagamiParams direct;
    NakagamiParams hop_g2r;
    NakagamiParams hop_r2a;
    double amp_direct = 0.0;
    double amp_g2r = 0.0;
    double amp_r2a = 0.0;
    double tx_snr = 0.0; ///< P_t / P_N

    /// Link of the given type using `n_elements` elements of the best RIS.
    Link link(LinkType type, int n_elements) const;
};

/// Resolves every UAV's links and returns them sorted by rank (weakest first).
/// With the closed-form composite method the direct shape is stored rounded to a
/// half-integer, so sampling and analysis see the same channel.
std::vector<UavLinks> resolve_links(const Scenario &scn, const EnvironmentParams &env, const ChannelOptions &opts);

/// NOMA outage of `u` (at its own rank) among `total` UAVs when it is served by
/// the link of the given type. Infeasible allocations throw.
double uav_outage(const UavLinks &u, std::size_t total, LinkType type, int n_elements, std::span<const double> beta,
                  std::span<const double> rates, CompositeMethod method);

/// Transmit SNR P_t / P_N with P_t given in dBm.
double transmit_snr(double tx_power_dbm, double bandwidth_hz, double noise_temp_k);

} // namespace risnoma

#endif
