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

// Command-line driver for the link sweeps, the RUOM report and the validation suite.

#include "risnoma/config.hpp"
#include "risnoma/errors.hpp"
#include "risnoma/experiments.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{

enum ExitCode
{
    kOk = 0,
    kOther = 1,
    kConfigError = 2,
    kInfeasible = 3,
    kValidationFailed = 4,
};

struct CommonOptions
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<bool> mc;
    std::optional<unsigned> threads;
};

void add_common(CLI::App *cmd, CommonOptions &opt)
{
    cmd->add_option("--config", opt.config, "JSON configuration file (absent: built-in defaults)");
    cmd->add_option("--seed", opt.seed, "Override the configuration seed");
    cmd->add_option("--out", opt.out, "Output directory (overrides output.directory)");
    cmd->add_flag_function(
        "--mc,!--no-mc", [&opt](std::int64_t count) { opt.mc = count > 0; },
        "Enable or disable the Monte Carlo columns");
    cmd->add_option("--threads", opt.threads, "Worker threads for Monte Carlo and candidate evaluation (0 = all)");
}

risnoma::ExperimentConfig resolve_config(const CommonOptions &opt)
{
    risnoma::ExperimentConfig cfg =
        opt.config.empty() ? risnoma::parse_config("") : risnoma::load_config(opt.config);
    if (opt.seed)
    {
        cfg.seed = *opt.seed;
    }
    if (!opt.out.empty())
    {
        cfg.output.directory = opt.out;
    }
    if (opt.mc)
    {
        cfg.mc.enabled = *opt.mc;
    }
    if (opt.threads)
    {
        cfg.mc.config.threads = *opt.threads;
        cfg.ruom.params.threads = *opt.threads;
    }
    cfg.validate();
    return cfg;
}

bool wants(const risnoma::ExperimentConfig &cfg, const std::string &format)
{
    const auto &f = cfg.output.formats;
    return std::find(f.begin(), f.end(), format) != f.end();
}

int emit_table(const risnoma::ExperimentConfig &cfg, const std::string &subcommand, const std::string &stem,
               const risnoma::ResultTable &table)
{
    const std::filesystem::path dir = cfg.output.directory;
    std::vector<std::string> files;
    if (wants(cfg, "csv"))
    {
        risnoma::write_file(dir, stem + ".csv", risnoma::to_csv(table));
        files.push_back(stem + ".csv");
    }
    if (wants(cfg, "json"))
    {
        risnoma::write_file(dir, stem + ".json", risnoma::to_json(table));
        files.push_back(stem + ".json");
    }
    risnoma::write_manifest(dir, cfg, subcommand, files);
    std::cout << subcommand << ": " << table.rows.size() << " rows written to " << dir.string() << '\n';
    return kOk;
}

int run(const std::string &subcommand, const CommonOptions &opt)
{
    const risnoma::ExperimentConfig cfg = resolve_config(opt);
    if (subcommand == "sweep-links")
    {
        return emit_table(cfg, subcommand, "sweep_links", risnoma::run_sweep_links(cfg));
    }
    if (subcommand == "sweep-power")
    {
        return emit_table(cfg, subcommand, "sweep_power", risnoma::run_sweep_power(cfg));
    }
    if (subcommand == "sweep-rate")
    {
        return emit_table(cfg, subcommand, "sweep_rate", risnoma::run_sweep_rate(cfg));
    }

    const std::filesystem::path dir = cfg.output.directory;
    if (subcommand == "ruom")
    {
        const risnoma::RuomReport report = risnoma::run_ruom_report(cfg);
        risnoma::write_file(dir, "ruom_trace.csv", risnoma::to_csv(report));
        risnoma::write_file(dir, "ruom_summary.json", risnoma::summary_json(report, cfg.ruom.params.delta));
        risnoma::write_manifest(dir, cfg, subcommand, {"ruom_trace.csv", "ruom_summary.json"});
        for (const auto &r : report.runs)
        {
            std::cout << "ruom lambda=" << risnoma::format_double(r.lambda) << ": ";
            if (!r.result)
            {
                std::cout << "infeasible (" << r.error << ")\n";
                continue;
            }
            const auto &last = r.result->trace.iterations.back();
            std::cout << (r.result->converged ? "converged" : "not converged") << " at t=" << last.t
                      << ", max outage " << risnoma::format_double(last.max_outage) << ", total elements "
                      << last.total_elements << '\n';
        }
        return report.any_infeasible ? kInfeasible : kOk;
    }

    // validate always runs the Monte Carlo reference.
    const risnoma::ValidationReport report = risnoma::run_validation(cfg);
    risnoma::write_file(dir, "validation.csv", risnoma::to_csv(report));
    risnoma::write_manifest(dir, cfg, subcommand, {"validation.csv"});
    std::size_t failed = 0;
    std::size_t skipped = 0;
    std::size_t widened = 0;
    for (const auto &c : report.checks)
    {
        failed += c.passed ? 0 : 1;
        skipped += c.skipped ? 1 : 0;
        widened += c.widened ? 1 : 0;
    }
    std::cout << "validate: " << report.checks.size() << " checks, " << failed << " failed, " << skipped
              << " skipped, " << widened << " with widened bounds\n";
    return report.passed ? kOk : kValidationFailed;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Outage analysis and RIS/NOMA resource optimization for UAV downlinks"};
    app.require_subcommand(1);
    CommonOptions opt;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"sweep-links", "Outage vs. reflecting elements for direct, RIS-only and composite links"},
        {"sweep-power", "Composite outage vs. reflecting elements for each transmit power"},
        {"sweep-rate", "Composite outage vs. reflecting elements for each target rate"},
        {"ruom", "Run the power/element optimizer for each configured lambda"},
        {"validate", "Compare analytic CDFs and outages against Monte Carlo"},
    };
    for (const auto &[name, help] : commands)
    {
        add_common(app.add_subcommand(name, help), opt);
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    const std::string subcommand = app.get_subcommands().front()->get_name();
    try
    {
        return run(subcommand, opt);
    }
    catch (const risnoma::ConfigError &e)
    {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfigError;
    }
    catch (const risnoma::NoFeasibleAllocation &e)
    {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    }
    catch (const risnoma::InfeasibleAllocation &e)
    {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
}
