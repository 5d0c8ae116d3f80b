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

#ifndef RISNOMA_ENVIRONMENT_HPP
#define RISNOMA_ENVIRONMENT_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace risnoma
{

/// Built-up environment and path-loss exponents. Defaults are the reference urban
/// setting (zeta = 20, v = 3e-4 per m^2, mu = 0.5, alpha_L = 2, alpha_N = 3.5).
struct EnvironmentParams
{
    double zeta = 20.0;
    double v = 3e-4;
    double mu = 0.5;
    double alpha_los = 2.0;
    double alpha_nlos = 3.5;

    /// Throws ConfigError unless zeta, v, mu > 0 and 2 <= alpha_los <= alpha_nlos.
    void validate() const;

    friend bool operator==(const EnvironmentParams &, const EnvironmentParams &) = default;
};

struct Position3D
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Position3D &, const Position3D &) = default;
};

double horizontal_distance(const Position3D &a, const Position3D &b);
double distance(const Position3D &a, const Position3D &b);

struct RisSite
{
    Position3D position;
    int max_elements = 1024;

    friend bool operator==(const RisSite &, const RisSite &) = default;
};

struct Scenario
{
    Position3D bs;
    std::vector<Position3D> uavs;
    std::vector<RisSite> riss;
    double tx_power_dbm = 37.0;
    double bandwidth_hz = 40e6;
    double noise_temp_k = 290.0;
    std::vector<double> target_rates_bpc;
    double cell_radius_m = 2000.0;
    std::uint64_t seed = 0;

    friend bool operator==(const Scenario &, const Scenario &) = default;
};

/// Inputs to random scenario placement.
struct ScenarioConfig
{
    std::size_t num_uavs = 3;
    std::size_t num_ris = 3;
    double cell_radius_m = 2000.0;
    double uav_altitude_min_m = 80.0;
    double uav_altitude_max_m = 120.0;
    double bs_altitude_m = 25.0;
    double ris_altitude_m = 30.0;
    int ris_max_elements = 1024;
    double tx_power_dbm = 37.0;
    double bandwidth_hz = 40e6;
    double noise_temp_k = 290.0;
    std::vector<double> target_rates_bpc{1.0, 1.0, 1.0};

    void validate() const;

    friend bool operator==(const ScenarioConfig &, const ScenarioConfig &) = default;
};

/// LoS probability between two endpoints; `tx` supplies z1, `rx` supplies z2.
/// Equal altitudes use the exponent d * sqrt(v mu); otherwise the horizontal
/// distance and the Q-function difference over the vertical separation.
double los_probability(const EnvironmentParams &env, const Position3D &tx, const Position3D &rx);

/// alpha = alpha_L * p + alpha_N * (1 - p).
double path_loss_exponent(const EnvironmentParams &env, double p_los);

/// Nakagami shape from the LoS probability through the Rician K-factor fit:
/// m = (e^(2.708 p^2) + 1)^2 / (2 e^(2.708 p^2) + 1).
double nakagami_shape(double p_los);

/// Amplitude gain sqrt(d^-alpha(d)). Throws DomainError when d == 0.
double path_loss_amplitude(const EnvironmentParams &env, const Position3D &tx, const Position3D &rx);

inline constexpr double kBoltzmann = 1.380649e-23;

/// Thermal noise power kappa * T * B in watts.
double noise_power_w(double bandwidth_hz, double temp_k);

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

/// Uniform placement in the cell disc (a Poisson field conditioned on its
/// count). BS at the origin. Deterministic in `seed`.
Scenario generate_scenario(const ScenarioConfig &config, std::uint64_t seed);

/// Index of the RIS maximizing the cascaded mean amplitude BS->RIS->UAV.
/// Ties resolve to the lowest index.
std::size_t select_best_ris(const EnvironmentParams &env, const Scenario &scn, std::size_t uav_index);

} // namespace risnoma

#endif
