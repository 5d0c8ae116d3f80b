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

#ifndef RISNOMA_CONFIG_HPP
#define RISNOMA_CONFIG_HPP

#include "risnoma/environment.hpp"
#include "risnoma/ruom.hpp"
#include "risnoma/sim_oracle.hpp"
#include "risnoma/system.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Experiment configuration. The on-disk format is JSON; every key is optional and
// absent keys take the reference defaults. docs/config.md lists the schema.
namespace risnoma
{

struct NomaConfig
{
    /// Fixed power split, or none for "optimize". The reference split sums to
    /// 0.9999 and is rescaled to 1 on load.
    std::optional<std::vector<double>> beta = std::vector<double>{0.9895, 0.0101, 0.0003};

    friend bool operator==(const NomaConfig &, const NomaConfig &) = default;
};

struct SweepConfig
{
    std::vector<int> n_elements{0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    std::vector<double> tx_power_dbm{30.0, 32.0, 34.0, 36.0, 38.0, 40.0};
    std::vector<double> target_rate_bpc{0.7, 0.9, 1.1, 1.3, 1.5};

    friend bool operator==(const SweepConfig &, const SweepConfig &) = default;
};

struct RuomConfig
{
    RuomParams params;
    std::vector<double> lambdas{0.1, 0.5, 0.9};

    friend bool operator==(const RuomConfig &, const RuomConfig &) = default;
};

struct McSection
{
    bool enabled = false;
    McConfig config{100'000, 1, 1 << 14, 0};

    friend bool operator==(const McSection &, const McSection &) = default;
};

struct ValidationConfig
{
    double tolerance = 0.01;  ///< absolute analytic-vs-MC bound, widened by the MC half-width
    double min_outage = 1e-2; ///< outage comparisons below this are skipped
    std::vector<int> n_elements{0, 16, 64};
    int cdf_points = 19;

    friend bool operator==(const ValidationConfig &, const ValidationConfig &) = default;
};

struct OutputConfig
{
    std::string directory = "out";
    std::vector<std::string> formats{"csv"}; ///< subset of {"csv", "json"}

    friend bool operator==(const OutputConfig &, const OutputConfig &) = default;
};

struct ExperimentConfig
{
    std::uint64_t seed = 6;
    ScenarioConfig scenario;
    EnvironmentParams environment;
    ChannelOptions channel;
    NomaConfig noma;
    SweepConfig sweep;
    RuomConfig ruom;
    McSection mc;
    ValidationConfig validation;
    OutputConfig output;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    friend bool operator==(const ExperimentConfig &, const ExperimentConfig &) = default;
};

/// Parses JSON text. Empty or whitespace-only input yields the defaults. Parse
/// errors carry the line and column; schema errors name the dotted field path.
ExperimentConfig parse_config(std::string_view text);

/// Reads and parses a file. Errors are prefixed with the path.
ExperimentConfig load_config(const std::filesystem::path &path);

/// Full JSON rendering of every field, accepted back by parse_config.
std::string serialize_config(const ExperimentConfig &cfg);

} // namespace risnoma

#endif
