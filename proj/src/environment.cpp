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

#include "risnoma/environment.hpp"

#include "risnoma/errors.hpp"
#include "risnoma/rng.hpp"
#include "risnoma/special_math.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace risnoma
{

void EnvironmentParams::validate() const
{
    if (!(zeta > 0.0))
    {
        throw ConfigError("environment.zeta must be > 0");
    }
    if (!(v > 0.0))
    {
        throw ConfigError("environment.v must be > 0");
    }
    if (!(mu > 0.0))
    {
        throw ConfigError("environment.mu must be > 0");
    }
    if (!(alpha_los >= 2.0 && alpha_los <= alpha_nlos))
    {
        throw ConfigError("environment.alpha_los must satisfy 2 <= alpha_los <= alpha_nlos");
    }
}

void ScenarioConfig::validate() const
{
    if (num_uavs < 1)
    {
        throw ConfigError("scenario.num_uavs must be >= 1");
    }
    if (num_ris < 1)
    {
        throw ConfigError("scenario.num_ris must be >= 1");
    }
    if (!(cell_radius_m > 0.0))
    {
        throw ConfigError("scenario.cell_radius_m must be > 0");
    }
    if (!(uav_altitude_min_m >= 0.0 && uav_altitude_min_m <= uav_altitude_max_m))
    {
        throw ConfigError("scenario.uav_altitude_min_m must satisfy 0 <= min <= uav_altitude_max_m");
    }
    if (!(bs_altitude_m >= 0.0))
    {
        throw ConfigError("scenario.bs_altitude_m must be >= 0");
    }
    if (!(ris_altitude_m >= 0.0))
    {
        throw ConfigError("scenario.ris_altitude_m must be >= 0");
    }
    if (ris_max_elements < 1)
    {
        throw ConfigError("scenario.ris_max_elements must be >= 1");
    }
    if (!std::isfinite(tx_power_dbm))
    {
        throw ConfigError("scenario.tx_power_dbm must be finite");
    }
    if (!(bandwidth_hz > 0.0))
    {
        throw ConfigError("scenario.bandwidth_hz must be > 0");
    }
    if (!(noise_temp_k > 0.0))
    {
        throw ConfigError("scenario.noise_temp_k must be > 0");
    }
    if (target_rates_bpc.size() != num_uavs)
    {
        throw ConfigError("noma.target_rates_bpc must have one entry per UAV");
    }
    for (double r : target_rates_bpc)
    {
        if (!(r > 0.0))
        {
            throw ConfigError("noma.target_rates_bpc entries must be > 0");
        }
    }
}

double horizontal_distance(const Position3D &a, const Position3D &b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

double distance(const Position3D &a, const Position3D &b)
{
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

double los_probability(const EnvironmentParams &env, const Position3D &tx, const Position3D &rx)
{
    const double z1 = tx.z;
    const double z2 = rx.z;
    const double decay = std::sqrt(env.v * env.mu);
    double p;
    if (z1 == z2)
    {
        const double base = 1.0 - std::exp(-(z1 * z1) / (2.0 * env.zeta * env.zeta));
        p = std::pow(base, distance(tx, rx) * decay);
    }
    else
    {
        const double dv = std::fabs(z1 - z2);
        const double dq = std::fabs(special::q_function(z1 / env.zeta) - special::q_function(z2 / env.zeta));
        const double base = 1.0 - std::sqrt(2.0 * std::numbers::pi) * env.zeta / dv * dq;
        // The base is a mean LoS fraction over the vertical span and stays in [0, 1];
        // clamp the last ulp.
        p = std::pow(std::clamp(base, 0.0, 1.0), horizontal_distance(tx, rx) * decay);
    }
    return std::clamp(p, 0.0, 1.0);
}

double path_loss_exponent(const EnvironmentParams &env, double p_los)
{
    if (!(p_los >= 0.0 && p_los <= 1.0))
    {
        throw DomainError("path_loss_exponent: p_los must lie in [0, 1]");
    }
    return env.alpha_los * p_los + env.alpha_nlos * (1.0 - p_los);
}

double nakagami_shape(double p_los)
{
    if (!(p_los >= 0.0 && p_los <= 1.0))
    {
        throw DomainError("nakagami_shape: p_los must lie in [0, 1]");
    }
    const double e = std::exp(2.708 * p_los * p_los);
    return (e + 1.0) * (e + 1.0) / (2.0 * e + 1.0);
}

double path_loss_amplitude(const EnvironmentParams &env, const Position3D &tx, const Position3D &rx)
{
    const double d = distance(tx, rx);
    if (d == 0.0)
    {
        throw DomainError("path_loss_amplitude: endpoints coincide (d = 0)");
    }
    const double alpha = path_loss_exponent(env, los_probability(env, tx, rx));
    return std::pow(d, -0.5 * alpha);
}

double noise_power_w(double bandwidth_hz, double temp_k)
{
    if (!(bandwidth_hz > 0.0) || !(temp_k > 0.0))
    {
        throw DomainError("noise_power_w: bandwidth and temperature must be > 0");
    }
    return kBoltzmann * temp_k * bandwidth_hz;
}

double dbm_to_watt(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watt_to_dbm(double watt)
{
    return 10.0 * std::log10(watt) + 30.0;
}

namespace
{

// 53-bit uniform in [0, 1); independent of the standard library's distribution
// implementations so placements are identical across toolchains.
double uniform01(Rng &rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Position3D uniform_in_disc(Rng &rng, double radius, double z)
{
    const double r = radius * std::sqrt(uniform01(rng));
    const double theta = 2.0 * std::numbers::pi * uniform01(rng);
    return {r * std::cos(theta), r * std::sin(theta), z};
}

} // namespace

Scenario generate_scenario(const ScenarioConfig &config, std::uint64_t seed)
{
    config.validate();
    Rng rng = make_rng(seed, 0x5ce7a210);

    Scenario scn;
    scn.bs = {0.0, 0.0, config.bs_altitude_m};
    scn.tx_power_dbm = config.tx_power_dbm;
    scn.bandwidth_hz = config.bandwidth_hz;
    scn.noise_temp_k = config.noise_temp_k;
    scn.target_rates_bpc = config.target_rates_bpc;
    scn.cell_radius_m = config.cell_radius_m;
    scn.seed = seed;

    scn.uavs.reserve(config.num_uavs);
    for (std::size_t i = 0; i < config.num_uavs; ++i)
    {
        Position3D p = uniform_in_disc(rng, config.cell_radius_m, 0.0);
        p.z = config.uav_altitude_min_m + (config.uav_altitude_max_m - config.uav_altitude_min_m) * uniform01(rng);
        scn.uavs.push_back(p);
    }
    scn.riss.reserve(config.num_ris);
    for (std::size_t k = 0; k < config.num_ris; ++k)
    {
        scn.riss.push_back({uniform_in_disc(rng, config.cell_radius_m, config.ris_altitude_m), config.ris_max_elements});
    }
    return scn;
}

std::size_t select_best_ris(const EnvironmentParams &env, const Scenario &scn, std::size_t uav_index)
{
    if (scn.riss.empty())
    {
        throw DomainError("select_best_ris: scenario has no RIS");
    }
    const Position3D &uav = scn.uavs.at(uav_index);
    std::size_t best = 0;
    double best_gain = -1.0;
    for (std::size_t k = 0; k < scn.riss.size(); ++k)
    {
        const Position3D &ris = scn.riss[k].position;
        const double gain = path_loss_amplitude(env, scn.bs, ris) * path_loss_amplitude(env, ris, uav);
        if (gain > best_gain)
        {
            best_gain = gain;
            best = k;
        }
    }
    return best;
}

} // namespace risnoma
