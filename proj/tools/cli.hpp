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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dbf/experiments.hpp"

namespace dbf::cli
{
    enum ExitStatus : int
    {
        exit_ok = 0,
        exit_config_error = 1,
        exit_runtime_flag = 2, ///< unresolved hitting time, censored runs, failed verification
    };

    struct OutputFile
    {
        std::string name;
        std::string content;
    };

    struct ManifestEntry
    {
        std::string file;
        std::string sha256;
    };

    struct Manifest
    {
        std::uint64_t seed = 0;
        std::vector<ManifestEntry> entries;
    };

    inline constexpr std::string_view resolved_config_name = "resolved.cfg";
    inline constexpr std::string_view manifest_name = "manifest.txt";

    std::string sha256_hex(std::string_view data);

    /**
     * Writes resolved.cfg, every result file and manifest.txt into `outdir`.
     * The manifest holds `seed=<seed>` followed by one `<file>=<sha256>` line per
     * emitted file. Throws std::runtime_error naming the path on I/O failure.
     */
    Manifest emit_reproduction_bundle(const ExperimentConfig &config, std::span<const OutputFile> results,
                                      const std::filesystem::path &outdir);

    std::string to_key_value(const Manifest &manifest);

    /**
     * Usage: dbf <sample-path|hitting-time|avg-convergence|verify|show-config>
     *            [--config FILE] [--out DIR] [--seed N] [--<config-key> VALUE]...
     *
     * Config keys are given in kebab-case (--n-s, --delta0, --alpha ...).
     */
    int parse_and_dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
}
