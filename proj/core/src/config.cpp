// Copyright 2026 The dbf Authors
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

#include "dbf/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "dbf/format.hpp"

namespace dbf
{
    namespace
    {
        constexpr std::array<std::string_view, 15> keys{
            "kind", "n_s", "trials", "alpha", "eps", "delta0", "power", "sigma2", "averaging_slots",
            "init", "channel_policy", "horizon", "horizon_per_ns", "runs", "seed"};

        std::string_view trim(std::string_view s)
        {
            const auto ws = " \t\r\n";
            const auto b = s.find_first_not_of(ws);
            if (b == std::string_view::npos)
                return {};
            return s.substr(b, s.find_last_not_of(ws) - b + 1);
        }

        std::string normalize_key(std::string_view key)
        {
            std::string k(trim(key));
            std::replace(k.begin(), k.end(), '-', '_');
            return k;
        }

        [[noreturn]] void bad_value(const std::string &key, std::string_view value, std::string_view expected)
        {
            throw ConfigError(key, "invalid value '" + std::string(value) + "' for key '" + key + "': expected " +
                                       std::string(expected));
        }

        std::uint64_t to_uint(const std::string &key, std::string_view value)
        {
            std::uint64_t out = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
            if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size())
                bad_value(key, value, "a nonnegative integer");
            return out;
        }

        double to_real(const std::string &key, std::string_view value)
        {
            auto v = parse_double(value);
            if (!v)
                bad_value(key, value, "a real number");
            return *v;
        }

        std::vector<std::string_view> split(std::string_view s, char sep)
        {
            std::vector<std::string_view> parts;
            std::size_t start = 0;
            while (true)
            {
                const auto pos = s.find(sep, start);
                parts.push_back(trim(s.substr(start, pos - start)));
                if (pos == std::string_view::npos)
                    break;
                start = pos + 1;
            }
            return parts;
        }

        std::vector<std::size_t> to_ns_list(const std::string &key, std::string_view value)
        {
            std::vector<std::size_t> out;
            if (value.find(':') != std::string_view::npos)
            {
                auto parts = split(value, ':');
                if (parts.size() != 3)
                    bad_value(key, value, "first:last:step");
                const auto first = to_uint(key, parts[0]);
                const auto last = to_uint(key, parts[1]);
                const auto step = to_uint(key, parts[2]);
                if (step == 0 || last < first)
                    bad_value(key, value, "first <= last and step >= 1");
                for (auto v = first; v <= last; v += step)
                    out.push_back(v);
                return out;
            }
            for (auto part : split(value, ','))
                out.push_back(to_uint(key, part));
            return out;
        }
    }

    std::span<const std::string_view> config_keys() noexcept
    {
        return keys;
    }

    std::string_view to_string(ExperimentKind kind) noexcept
    {
        switch (kind)
        {
        case ExperimentKind::SamplePath:
            return "sample-path";
        case ExperimentKind::HittingTime:
            return "hitting-time";
        case ExperimentKind::AvgConvergence:
            return "avg-convergence";
        }
        return "?";
    }

    void set_config_value(ExperimentConfig &config, std::string_view raw_key, std::string_view raw_value)
    {
        const std::string key = normalize_key(raw_key);
        const std::string_view value = trim(raw_value);

        if (key == "kind")
        {
            if (value == "sample-path")
                config.kind = ExperimentKind::SamplePath;
            else if (value == "hitting-time")
                config.kind = ExperimentKind::HittingTime;
            else if (value == "avg-convergence")
                config.kind = ExperimentKind::AvgConvergence;
            else
                bad_value(key, value, "sample-path, hitting-time or avg-convergence");
        }
        else if (key == "n_s")
            config.n_s_values = to_ns_list(key, value);
        else if (key == "trials")
            config.trials = to_uint(key, value);
        else if (key == "alpha")
        {
            config.alphas.clear();
            for (auto part : split(value, ','))
                config.alphas.push_back(to_real(key, part));
        }
        else if (key == "eps")
            config.eps = to_real(key, value);
        else if (key == "delta0")
        {
            auto v = parse_angle(value);
            if (!v)
                bad_value(key, value, "radians, e.g. 0.0349 or pi/90");
            config.delta0 = *v;
        }
        else if (key == "power")
            config.power = to_real(key, value);
        else if (key == "sigma2")
            config.sigma2 = to_real(key, value);
        else if (key == "averaging_slots")
        {
            const auto v = to_uint(key, value);
            if (v > 1'000'000'000)
                bad_value(key, value, "at most 1e9");
            config.averaging_slots = static_cast<int>(v);
        }
        else if (key == "init")
        {
            if (value == "origin")
                config.init = InitMode::Kind::ZeroBeamformingPhase;
            else if (value == "uniform")
                config.init = InitMode::Kind::UniformRandom;
            else
                bad_value(key, value, "origin or uniform");
        }
        else if (key == "channel_policy")
        {
            if (value == "redrawn")
                config.channel_policy = ChannelPolicy::RedrawnPerTrial;
            else if (value == "fixed")
                config.channel_policy = ChannelPolicy::FixedAcrossTrials;
            else
                bad_value(key, value, "redrawn or fixed");
        }
        else if (key == "horizon")
        {
            if (value == "auto")
                config.horizon.reset();
            else
                config.horizon = to_uint(key, value);
        }
        else if (key == "horizon_per_ns")
            config.horizon_per_ns = to_uint(key, value);
        else if (key == "runs")
            config.runs = to_uint(key, value);
        else if (key == "seed")
            config.seed = to_uint(key, value);
        else
            throw ConfigError(key, "unknown key '" + key + "'");
    }

    void check_config(const ExperimentConfig &config)
    {
        try
        {
            config.validate();
        }
        catch (const std::invalid_argument &e)
        {
            const std::string what = e.what();
            throw ConfigError(what.substr(0, what.find(':')), what);
        }
    }

    ExperimentConfig parse_config(std::string_view text, ExperimentConfig base, bool validate)
    {
        std::vector<std::string> seen;
        std::size_t line_no = 0;
        for (auto line : split(text, '\n'))
        {
            ++line_no;
            if (line.empty() || line.front() == '#')
                continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError("", "line " + std::to_string(line_no) + ": expected key=value");
            const std::string key = normalize_key(line.substr(0, eq));
            if (std::find(seen.begin(), seen.end(), key) != seen.end())
                throw ConfigError(key, "duplicate key '" + key + "'");
            seen.push_back(key);
            set_config_value(base, key, line.substr(eq + 1));
        }
        if (validate)
            check_config(base);
        return base;
    }

    ExperimentConfig load_config_file(const std::string &path, bool validate)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("config", "cannot open config file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_config(buf.str(), {}, validate);
    }

    std::string to_config_text(const ExperimentConfig &config)
    {
        std::ostringstream os;
        os << "kind=" << to_string(config.kind) << "\n";
        os << "n_s=";
        for (std::size_t i = 0; i < config.n_s_values.size(); ++i)
            os << (i ? "," : "") << config.n_s_values[i];
        os << "\ntrials=" << config.trials << "\nalpha=";
        for (std::size_t i = 0; i < config.alphas.size(); ++i)
            os << (i ? "," : "") << format_double(config.alphas[i]);
        os << "\neps=" << format_double(config.eps);
        os << "\ndelta0=" << format_double(config.delta0);
        os << "\npower=" << format_double(config.power);
        os << "\nsigma2=" << format_double(config.sigma2);
        os << "\naveraging_slots=" << config.averaging_slots;
        os << "\ninit=" << (config.init == InitMode::Kind::UniformRandom ? "uniform" : "origin");
        os << "\nchannel_policy=" << (config.channel_policy == ChannelPolicy::FixedAcrossTrials ? "fixed" : "redrawn");
        os << "\nhorizon=";
        if (config.horizon)
            os << *config.horizon;
        else
            os << "auto";
        os << "\nhorizon_per_ns=" << config.horizon_per_ns;
        os << "\nruns=" << config.runs;
        os << "\nseed=" << config.seed << "\n";
        return os.str();
    }
}
