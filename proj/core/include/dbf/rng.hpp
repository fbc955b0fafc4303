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
#include <random>

namespace dbf
{
    // All stochastic operations take an explicit engine so runs are reproducible.
    using Rng = std::mt19937_64;

    constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Per-trial seed, a pure function of (master seed, n_s, trial index).
    constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n_s, std::uint64_t trial) noexcept
    {
        return splitmix64(splitmix64(splitmix64(master) ^ n_s) ^ (trial * 0xD1B54A32D192ED03ULL));
    }
}
