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

#ifndef RISNOMA_EXPERIMENTS_HPP
#define RISNOMA_EXPERIMENTS_HPP

#include "risnoma/config.hpp"
#include "risnoma/ruom.hpp"
#include "risnoma/system.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace risnoma
{

inline constexpr const char *kVersion = "1.0.0";

/// Scenario drawn from the configuration seed and its resolved links by rank.
struct SystemModel
{
    Scenario scenario;
    std::vector<UavLinks> links;
};

SystemModel build_system(const ExperimentConfig &cfg);

struct ResultRow
{
    std::string sweep_var;
    double sweep_value = 0.0;
    int n_elements = 0;
    std::size_t uav = 0; ///< NOMA rank, 1 = weakest
    LinkType link_type = LinkType::direct;
    double outage_analytic = 0.0;
    std::optional<double> outage_mc;
    std::optional<double> mc_halfwidth;
};

struct ResultTable
{
    std::vector<ResultRow> rows;
};

/// Outage against the element count for the direct, RIS-only and composite links
/// under the fixed power split. The direct curve is flat in N.
ResultTable run_sweep_links(const ExperimentConfig &cfg);
/// Composite outage against N for every transmit power in the sweep grid.
ResultTable run_sweep_power(const ExperimentConfig &cfg);
/// Composite outage against N for every common target rate in the sweep grid.
ResultTable run_sweep_rate(const ExperimentConfig &cfg);

/// Header: sweep_var,sweep_value,n_elements,uav,link_type,outage_analytic,outage_mc,mc_halfwidth
std::string to_csv(const ResultTable &table);
std::string to_json(const ResultTable &table);

struct RuomRun
{
    double lambda = 0.0;
    std::optional<RuomResult> result;
    std::string error; ///< set when the optimizer failed
};

struct RuomReport
{
    std::vector<std::size_t> ris_of_uav; ///< by rank
    std::vector<RuomRun> runs;
    bool any_infeasible = false;
};

/// One optimizer run per configured lambda.
RuomReport run_ruom_report(const ExperimentConfig &cfg);

/// Header: lambda,t,uav,ris,outage,n_elements,beta,max_outage,total_elements,capacity_exhausted
std::string to_csv(const RuomReport &report);
/// Per-lambda summary: convergence, final outages, element totals at t = 1 and t*.
std::string summary_json(const RuomReport &report, double delta);

struct ValidationCheck
{
    std::string kind; ///< "cdf" or "outage"
    std::size_t uav = 0;
    LinkType link_type = LinkType::direct;
    int n_elements = 0;
    double point = 0.0; ///< SNR for cdf checks, 0 for outage checks
    double analytic = 0.0;
    double mc = 0.0;
    double halfwidth = 0.0;
    double bound = 0.0;   ///< tolerance + halfwidth
    bool widened = false; ///< halfwidth exceeds the tolerance (underpowered run)
    bool skipped = false; ///< outage below validate.min_outage
    bool passed = true;
};

struct ValidationReport
{
    std::vector<ValidationCheck> checks;
    bool passed = true;
};

/// Analytic CDFs at interior quantiles and NOMA outages against Monte Carlo.
ValidationReport run_validation(const ExperimentConfig &cfg);

/// Header: kind,uav,link_type,n_elements,point,analytic,mc,halfwidth,bound,widened,skipped,passed
std::string to_csv(const ValidationReport &report);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Writes `content` to dir/name, creating dir as needed.
void write_file(const std::filesystem::path &dir, const std::string &name, const std::string &content);

/// manifest.json: tool version, subcommand, seed, file list and the config echo.
void write_manifest(const std::filesystem::path &dir, const ExperimentConfig &cfg, const std::string &subcommand,
                    const std::vector<std::string> &files);

} // namespace risnoma

#endif
