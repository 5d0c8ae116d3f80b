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

#include "risnoma/config.hpp"

#include "risnoma/errors.hpp"
#include "risnoma/noma.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace risnoma
{

namespace
{

using json = nlohmann::json;

// Typed access to one JSON object that rejects unknown keys on finish().
class Section
{
  public:
    Section(const json &obj, std::string path) : obj_(obj), path_(std::move(path))
    {
        if (!obj_.is_object())
        {
            throw ConfigError(path_ + " must be an object");
        }
    }

    const json *find(const std::string &key)
    {
        known_.insert(key);
        const auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    std::string field(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

    void number(const std::string &key, double &out)
    {
        if (const json *v = find(key))
        {
            if (!v->is_number())
            {
                throw ConfigError(field(key) + " must be a number");
            }
            out = v->get<double>();
        }
    }

    template <typename Int> void integer(const std::string &key, Int &out)
    {
        if (const json *v = find(key))
        {
            out = to_integer<Int>(*v, field(key));
        }
    }

    void boolean(const std::string &key, bool &out)
    {
        if (const json *v = find(key))
        {
            if (!v->is_boolean())
            {
                throw ConfigError(field(key) + " must be true or false");
            }
            out = v->get<bool>();
        }
    }

    void string(const std::string &key, std::string &out)
    {
        if (const json *v = find(key))
        {
            if (!v->is_string())
            {
                throw ConfigError(field(key) + " must be a string");
            }
            out = v->get<std::string>();
        }
    }

    // A number is accepted as a one-element list when `scalar_ok`.
    void number_list(const std::string &key, std::vector<double> &out, bool scalar_ok = false)
    {
        if (const json *v = find(key))
        {
            if (scalar_ok && v->is_number())
            {
                out.assign(1, v->get<double>());
                return;
            }
            if (!v->is_array())
            {
                throw ConfigError(field(key) + " must be a list of numbers");
            }
            out.clear();
            for (const json &e : *v)
            {
                if (!e.is_number())
                {
                    throw ConfigError(field(key) + " must be a list of numbers");
                }
                out.push_back(e.get<double>());
            }
        }
    }

    void integer_list(const std::string &key, std::vector<int> &out)
    {
        if (const json *v = find(key))
        {
            if (!v->is_array())
            {
                throw ConfigError(field(key) + " must be a list of integers");
            }
            out.clear();
            for (const json &e : *v)
            {
                out.push_back(to_integer<int>(e, field(key)));
            }
        }
    }

    void string_list(const std::string &key, std::vector<std::string> &out)
    {
        if (const json *v = find(key))
        {
            if (!v->is_array())
            {
                throw ConfigError(field(key) + " must be a list of strings");
            }
            out.clear();
            for (const json &e : *v)
            {
                if (!e.is_string())
                {
                    throw ConfigError(field(key) + " must be a list of strings");
                }
                out.push_back(e.get<std::string>());
            }
        }
    }

    // "derive" or null leaves the value unset.
    void optional_number(const std::string &key, std::optional<double> &out)
    {
        if (const json *v = find(key))
        {
            if (v->is_null() || (v->is_string() && v->get<std::string>() == "derive"))
            {
                out.reset();
            }
            else if (v->is_number())
            {
                out = v->get<double>();
            }
            else
            {
                throw ConfigError(field(key) + " must be a number or \"derive\"");
            }
        }
    }

    Section child(const std::string &key)
    {
        static const json empty = json::object();
        const json *v = find(key);
        return Section(v ? *v : empty, field(key));
    }

    void finish() const
    {
        for (const auto &item : obj_.items())
        {
            if (!known_.count(item.key()))
            {
                throw ConfigError("unknown field " + field(item.key()));
            }
        }
    }

  private:
    template <typename Int> static Int to_integer(const json &v, const std::string &name)
    {
        if (v.is_number_unsigned())
        {
            const auto u = v.get<std::uint64_t>();
            if (u > static_cast<std::uint64_t>(std::numeric_limits<Int>::max()))
            {
                throw ConfigError(name + " is out of range");
            }
            return static_cast<Int>(u);
        }
        if (v.is_number_integer())
        {
            const auto i = v.get<std::int64_t>();
            if constexpr (std::is_unsigned_v<Int>)
            {
                if (i < 0)
                {
                    throw ConfigError(name + " must be >= 0");
                }
            }
            else if (i < std::numeric_limits<Int>::min() || i > std::numeric_limits<Int>::max())
            {
                throw ConfigError(name + " is out of range");
            }
            return static_cast<Int>(i);
        }
        throw ConfigError(name + " must be an integer");
    }

    const json &obj_;
    std::string path_;
    std::set<std::string> known_;
};

CompositeMethod parse_method(const std::string &s)
{
    if (s == "closed_form")
    {
        return CompositeMethod::closed_form;
    }
    if (s == "quadrature")
    {
        return CompositeMethod::quadrature;
    }
    throw ConfigError("channel.composite_method must be \"closed_form\" or \"quadrature\"");
}

void read_config(const json &root, ExperimentConfig &cfg)
{
    Section top(root, "");
    top.integer("seed", cfg.seed);

    {
        Section s = top.child("scenario");
        ScenarioConfig &c = cfg.scenario;
        s.integer("num_uavs", c.num_uavs);
        s.integer("num_ris", c.num_ris);
        s.number("cell_radius_m", c.cell_radius_m);
        s.number("uav_altitude_min_m", c.uav_altitude_min_m);
        s.number("uav_altitude_max_m", c.uav_altitude_max_m);
        s.number("bs_altitude_m", c.bs_altitude_m);
        s.number("ris_altitude_m", c.ris_altitude_m);
        s.integer("ris_max_elements", c.ris_max_elements);
        s.number("tx_power_dbm", c.tx_power_dbm);
        s.number("bandwidth_hz", c.bandwidth_hz);
        s.number("noise_temp_k", c.noise_temp_k);
        s.finish();
    }
    {
        Section s = top.child("environment");
        EnvironmentParams &e = cfg.environment;
        s.number("zeta", e.zeta);
        s.number("v", e.v);
        s.number("mu", e.mu);
        s.number("alpha_los", e.alpha_los);
        s.number("alpha_nlos", e.alpha_nlos);
        s.finish();
    }
    {
        Section s = top.child("channel");
        ChannelOptions &c = cfg.channel;
        s.number("omega_g2r", c.omega_g2r);
        s.number("omega_r2a", c.omega_r2a);
        s.number("omega_direct", c.omega_direct);
        s.optional_number("m_g2r", c.m_g2r);
        s.optional_number("m_r2a", c.m_r2a);
        s.optional_number("m_direct", c.m_direct);
        std::string method(to_string(c.composite_method));
        s.string("composite_method", method);
        c.composite_method = parse_method(method);
        s.finish();
    }
    {
        Section s = top.child("noma");
        std::vector<double> rates = cfg.scenario.target_rates_bpc;
        s.number_list("target_rates_bpc", rates, true);
        if (const json *r = s.find("target_rates_bpc"); r && r->is_number())
        {
            rates.assign(cfg.scenario.num_uavs, rates.front());
        }
        cfg.scenario.target_rates_bpc = rates;
        if (const json *b = s.find("beta"))
        {
            if (b->is_string() && b->get<std::string>() == "optimize")
            {
                cfg.noma.beta.reset();
            }
            else
            {
                std::vector<double> beta;
                s.number_list("beta", beta);
                cfg.noma.beta = beta;
            }
        }
        s.finish();
    }
    {
        Section s = top.child("sweep");
        s.integer_list("n_elements", cfg.sweep.n_elements);
        s.number_list("tx_power_dbm", cfg.sweep.tx_power_dbm);
        s.number_list("target_rate_bpc", cfg.sweep.target_rate_bpc);
        s.finish();
    }
    {
        Section s = top.child("ruom");
        RuomParams &p = cfg.ruom.params;
        s.number_list("lambda", cfg.ruom.lambdas, true);
        s.number("delta", p.delta);
        s.number("eps_in", p.eps_in);
        s.number("eps_ac", p.eps_ac);
        s.number("eps_conv", p.eps_conv);
        s.integer("max_iter", p.max_iter);
        s.boolean("warm_start", p.warm_start);
        s.boolean("anchor_local_grid", p.anchor_local_grid);
        s.integer("threads", p.threads);
        s.finish();
    }
    {
        Section s = top.child("mc");
        s.boolean("enabled", cfg.mc.enabled);
        s.integer("trials", cfg.mc.config.trials);
        s.integer("batch", cfg.mc.config.batch);
        s.integer("threads", cfg.mc.config.threads);
        s.finish();
    }
    {
        Section s = top.child("validate");
        s.number("tolerance", cfg.validation.tolerance);
        s.number("min_outage", cfg.validation.min_outage);
        s.integer_list("n_elements", cfg.validation.n_elements);
        s.integer("cdf_points", cfg.validation.cdf_points);
        s.finish();
    }
    {
        Section s = top.child("output");
        s.string("directory", cfg.output.directory);
        s.string_list("formats", cfg.output.formats);
        s.finish();
    }
    top.finish();
}

void require_nonempty(bool nonempty, const char *field)
{
    if (!nonempty)
    {
        throw ConfigError(std::string(field) + " must not be empty");
    }
}

void check_element_grid(const std::vector<int> &grid, int cap, const char *field)
{
    require_nonempty(!grid.empty(), field);
    for (int n : grid)
    {
        if (n < 0 || n > cap)
        {
            throw ConfigError(std::string(field) + " entries must lie in [0, scenario.ris_max_elements]");
        }
    }
}

} // namespace

void ExperimentConfig::validate() const
{
    scenario.validate();
    environment.validate();
    for (auto [v, name] : {std::pair{channel.omega_g2r, "channel.omega_g2r"},
                           std::pair{channel.omega_r2a, "channel.omega_r2a"},
                           std::pair{channel.omega_direct, "channel.omega_direct"}})
    {
        if (!(v > 0.0))
        {
            throw ConfigError(std::string(name) + " must be > 0");
        }
    }
    for (auto [v, name] : {std::pair{channel.m_g2r, "channel.m_g2r"}, std::pair{channel.m_r2a, "channel.m_r2a"},
                           std::pair{channel.m_direct, "channel.m_direct"}})
    {
        if (v && !(*v >= 0.5))
        {
            throw ConfigError(std::string(name) + " must be >= 0.5");
        }
    }

    if (noma.beta)
    {
        const auto &beta = *noma.beta;
        if (beta.size() != scenario.num_uavs)
        {
            throw ConfigError("noma.beta must have one entry per UAV");
        }
        const double sum = std::accumulate(beta.begin(), beta.end(), 0.0);
        if (std::fabs(sum - 1.0) > 1e-9 * static_cast<double>(beta.size()))
        {
            throw ConfigError("noma.beta must sum to 1");
        }
        try
        {
            PowerAllocation check(beta);
        }
        catch (const DomainError &e)
        {
            throw ConfigError(std::string("noma.beta: ") + e.what());
        }
    }

    check_element_grid(sweep.n_elements, scenario.ris_max_elements, "sweep.n_elements");
    require_nonempty(!sweep.tx_power_dbm.empty(), "sweep.tx_power_dbm");
    require_nonempty(!sweep.target_rate_bpc.empty(), "sweep.target_rate_bpc");
    for (double p : sweep.tx_power_dbm)
    {
        if (!std::isfinite(p))
        {
            throw ConfigError("sweep.tx_power_dbm entries must be finite");
        }
    }
    for (double r : sweep.target_rate_bpc)
    {
        if (!(r > 0.0))
        {
            throw ConfigError("sweep.target_rate_bpc entries must be > 0");
        }
    }

    require_nonempty(!ruom.lambdas.empty(), "ruom.lambda");
    for (double l : ruom.lambdas)
    {
        RuomParams p = ruom.params;
        p.lambda = l;
        p.validate();
    }

    mc.config.validate();

    if (!(validation.tolerance > 0.0 && validation.tolerance < 1.0))
    {
        throw ConfigError("validate.tolerance must lie in (0, 1)");
    }
    if (!(validation.min_outage >= 0.0 && validation.min_outage < 1.0))
    {
        throw ConfigError("validate.min_outage must lie in [0, 1)");
    }
    check_element_grid(validation.n_elements, scenario.ris_max_elements, "validate.n_elements");
    if (validation.cdf_points < 1)
    {
        throw ConfigError("validate.cdf_points must be >= 1");
    }

    if (output.directory.empty())
    {
        throw ConfigError("output.directory must not be empty");
    }
    for (const auto &f : output.formats)
    {
        if (f != "csv" && f != "json")
        {
            throw ConfigError("output.formats entries must be \"csv\" or \"json\"");
        }
    }
}

ExperimentConfig parse_config(std::string_view text)
{
    ExperimentConfig cfg;
    const bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (!blank)
    {
        json root;
        try
        {
            root = json::parse(text.begin(), text.end());
        }
        catch (const json::parse_error &e)
        {
            // The message already carries "line L, column C".
            throw ConfigError(e.what());
        }
        read_config(root, cfg);
    }

    // The reference split sums to 0.9999; rescale small rounding gaps only.
    if (cfg.noma.beta)
    {
        auto &beta = *cfg.noma.beta;
        const double sum = std::accumulate(beta.begin(), beta.end(), 0.0);
        if (sum > 0.0 && std::fabs(sum - 1.0) <= 1e-3 && std::fabs(sum - 1.0) > 1e-12)
        {
            for (double &b : beta)
            {
                b /= sum;
            }
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ConfigError(path.string() + ": cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try
    {
        return parse_config(buf.str());
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string serialize_config(const ExperimentConfig &cfg)
{
    auto optional_m = [](const std::optional<double> &m) { return m ? json(*m) : json("derive"); };
    json j;
    j["seed"] = cfg.seed;
    const ScenarioConfig &s = cfg.scenario;
    j["scenario"] = {{"num_uavs", s.num_uavs},
                     {"num_ris", s.num_ris},
                     {"cell_radius_m", s.cell_radius_m},
                     {"uav_altitude_min_m", s.uav_altitude_min_m},
                     {"uav_altitude_max_m", s.uav_altitude_max_m},
                     {"bs_altitude_m", s.bs_altitude_m},
                     {"ris_altitude_m", s.ris_altitude_m},
                     {"ris_max_elements", s.ris_max_elements},
                     {"tx_power_dbm", s.tx_power_dbm},
                     {"bandwidth_hz", s.bandwidth_hz},
                     {"noise_temp_k", s.noise_temp_k}};
    const EnvironmentParams &e = cfg.environment;
    j["environment"] = {
        {"zeta", e.zeta}, {"v", e.v}, {"mu", e.mu}, {"alpha_los", e.alpha_los}, {"alpha_nlos", e.alpha_nlos}};
    const ChannelOptions &c = cfg.channel;
    j["channel"] = {{"omega_g2r", c.omega_g2r},
                    {"omega_r2a", c.omega_r2a},
                    {"omega_direct", c.omega_direct},
                    {"m_g2r", optional_m(c.m_g2r)},
                    {"m_r2a", optional_m(c.m_r2a)},
                    {"m_direct", optional_m(c.m_direct)},
                    {"composite_method", std::string(to_string(c.composite_method))}};
    j["noma"] = {{"target_rates_bpc", s.target_rates_bpc},
                 {"beta", cfg.noma.beta ? json(*cfg.noma.beta) : json("optimize")}};
    j["sweep"] = {{"n_elements", cfg.sweep.n_elements},
                  {"tx_power_dbm", cfg.sweep.tx_power_dbm},
                  {"target_rate_bpc", cfg.sweep.target_rate_bpc}};
    const RuomParams &p = cfg.ruom.params;
    j["ruom"] = {{"lambda", cfg.ruom.lambdas},
                 {"delta", p.delta},
                 {"eps_in", p.eps_in},
                 {"eps_ac", p.eps_ac},
                 {"eps_conv", p.eps_conv},
                 {"max_iter", p.max_iter},
                 {"warm_start", p.warm_start},
                 {"anchor_local_grid", p.anchor_local_grid},
                 {"threads", p.threads}};
    j["mc"] = {{"enabled", cfg.mc.enabled},
               {"trials", cfg.mc.config.trials},
               {"batch", cfg.mc.config.batch},
               {"threads", cfg.mc.config.threads}};
    j["validate"] = {{"tolerance", cfg.validation.tolerance},
                     {"min_outage", cfg.validation.min_outage},
                     {"n_elements", cfg.validation.n_elements},
                     {"cdf_points", cfg.validation.cdf_points}};
    j["output"] = {{"directory", cfg.output.directory}, {"formats", cfg.output.formats}};
    return j.dump(2) + "\n";
}

} // namespace risnoma
