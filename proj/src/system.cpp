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

#include "risnoma/system.hpp"

#include "risnoma/noma.hpp"

#include <algorithm>
#include <numeric>

namespace risnoma
{

Link UavLinks::link(LinkType type, int n_elements) const
{
    Link l;
    l.type = type;
    l.direct = direct;
    l.ris.hop_g2r = hop_g2r;
    l.ris.hop_r2a = hop_r2a;
    l.ris.n_elements = n_elements;
    l.ris.amp_g2r = amp_g2r;
    l.ris.amp_r2a = amp_r2a;
    l.budget = make_link_budget(tx_snr, amp_direct, amp_g2r * amp_r2a);
    return l;
}

double uav_outage(const UavLinks &u, std::size_t total, LinkType type, int n_elements, std::span<const double> beta,
                  std::span<const double> rates, CompositeMethod method)
{
    const Link l = u.link(type, n_elements);
    OutageQuery q;
    q.rank = u.rank;
    q.total = total;
    q.parent_cdf = [&l, method](double g) { return link_snr_cdf(l, g, method); };
    q.target_rates.assign(rates.begin(), rates.end());
    return outage_probability(q, beta);
}

double transmit_snr(double tx_power_dbm, double bandwidth_hz, double noise_temp_k)
{
    return dbm_to_watt(tx_power_dbm) / noise_power_w(bandwidth_hz, noise_temp_k);
}

std::vector<UavLinks> resolve_links(const Scenario &scn, const EnvironmentParams &env, const ChannelOptions &opts)
{
    const double tx_snr = transmit_snr(scn.tx_power_dbm, scn.bandwidth_hz, scn.noise_temp_k);
    std::vector<UavLinks> out;
    out.reserve(scn.uavs.size());
    for (std::size_t u = 0; u < scn.uavs.size(); ++u)
    {
        const Position3D &uav = scn.uavs[u];
        UavLinks l;
        l.uav_index = u;
        l.best_ris = select_best_ris(env, scn, u);
        const Position3D &ris = scn.riss[l.best_ris].position;

        const double p_direct = los_probability(env, scn.bs, uav);
        const double p_g2r = los_probability(env, scn.bs, ris);
        const double p_r2a = los_probability(env, ris, uav);
        l.direct = {opts.m_direct.value_or(nakagami_shape(p_direct)), opts.omega_direct};
        l.hop_g2r = {opts.m_g2r.value_or(nakagami_shape(p_g2r)), opts.omega_g2r};
        l.hop_r2a = {opts.m_r2a.value_or(nakagami_shape(p_r2a)), opts.omega_r2a};
        if (opts.composite_method == CompositeMethod::closed_form)
        {
            l.direct.m = round_to_half_integer(l.direct.m);
        }
        l.direct.validate();
        l.hop_g2r.validate();
        l.hop_r2a.validate();
        l.amp_direct = path_loss_amplitude(env, scn.bs, uav);
        l.amp_g2r = path_loss_amplitude(env, scn.bs, ris);
        l.amp_r2a = path_loss_amplitude(env, ris, uav);
        l.tx_snr = tx_snr;
        out.push_back(l);
    }

    // Rank by mean direct SNR, weakest first; ties keep scenario order.
    std::stable_sort(out.begin(), out.end(), [](const UavLinks &a, const UavLinks &b) {
        return a.amp_direct * a.amp_direct * a.direct.omega < b.amp_direct * b.amp_direct * b.direct.omega;
    });
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        out[i].rank = i + 1;
    }
    return out;
}

} // namespace risnoma
