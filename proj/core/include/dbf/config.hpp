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

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dbf/experiments.hpp"

namespace dbf
{
    /// Bad config input; key() names the offending key (empty for syntax errors).
    class ConfigError : public std::runtime_error
    {
    public:
        ConfigError(std::string key, const std::string &message)
            : std::runtime_error(message), key_(std::move(key)) {}
        const std::string &key() const noexcept { return key_; }

    private:
        std::string key_;
    };

    /**
     * Line-oriented `key = value` format. Blank lines and lines starting with
     * '#' are ignored; keys may be written with '_' or '-'.
     *
     *   kind             sample-path | hitting-time | avg-convergence
     *   n_s              comma list (10,20,30) or range first:last:step
     *   trials           trials per n_s
     *   alpha            comma list of fractions in (0, 1]
     *   eps              convergence-region width relative to the optimum
     *   delta0           perturbation half-width, radians; accepts pi/90 style
     *   power            transmit power P
     *   sigma2           receiver noise variance (0 = noiseless)
     *   averaging_slots  slots averaged per noisy magnitude estimate
     *   init             origin | uniform
     *   channel_policy   redrawn | fixed
     *   horizon          absolute step horizon, or auto = horizon_per_ns * n_s
     *   horizon_per_ns   horizon multiplier
     *   runs             number of sample paths
     *   seed             master seed
     */
    std::span<const std::string_view> config_keys() noexcept;

    /// Sets one key from its text form. Throws ConfigError for unknown keys and malformed values.
    void set_config_value(ExperimentConfig &config, std::string_view key, std::string_view value);

    /// Applies every line of `text` on top of `base`, then validates unless told not to.
    ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {}, bool validate = true);

    ExperimentConfig load_config_file(const std::string &path, bool validate = true);

    /// ExperimentConfig::validate with failures reported as ConfigError naming the key.
    void check_config(const ExperimentConfig &config);

    /// Every key with its resolved value, in config_keys() order. Round-trips through parse_config.
    std::string to_config_text(const ExperimentConfig &config);

    std::string_view to_string(ExperimentKind kind) noexcept;
}
