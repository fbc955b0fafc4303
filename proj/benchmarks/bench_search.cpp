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

#include <benchmark/benchmark.h>

#include "dbf/channel.hpp"
#include "dbf/experiments.hpp"
#include "dbf/search.hpp"

using namespace dbf;

static void BM_Magnitude(benchmark::State &state)
{
    const auto n_s = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    const auto channel = generate_channel(n_s, rng);
    const PhaseVector theta(std::vector<double>(n_s, 0.5));
    for (auto _ : state)
        benchmark::DoNotOptimize(magnitude(channel, theta, 1.0));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n_s));
}
BENCHMARK(BM_Magnitude)->RangeMultiplier(10)->Range(10, 1000);

static void BM_OneBitStep(benchmark::State &state)
{
    const auto n_s = static_cast<std::size_t>(state.range(0));
    Rng rng(2);
    const auto channel = generate_channel(n_s, rng);
    const PowerConfig power{};
    const PerturbationSpec spec{};
    auto s = init_state(channel, InitMode::zero_beamforming_phase(), power, rng);
    for (auto _ : state)
    {
        auto r = one_bit_step(s, channel, spec, power, rng);
        s = std::move(r.state);
    }
}
BENCHMARK(BM_OneBitStep)->RangeMultiplier(10)->Range(10, 1000);

static void BM_TrajectoryToAlpha(benchmark::State &state)
{
    const auto n_s = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state)
    {
        Rng rng(seed++);
        const auto channel = generate_channel(n_s, rng);
        auto t = run_trajectory(channel, PerturbationSpec{}, PowerConfig{}, InitMode::zero_beamforming_phase(),
                                StopRule::alpha_fraction(0.9, 200 * n_s), rng);
        benchmark::DoNotOptimize(t.step_count());
    }
}
BENCHMARK(BM_TrajectoryToAlpha)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_HittingTimeSmall(benchmark::State &state)
{
    ExperimentConfig c;
    c.n_s_values = {10, 20, 30};
    c.trials = 20;
    c.alphas = {0.5, 0.9};
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_hitting_time(c).points.size());
}
BENCHMARK(BM_HittingTimeSmall)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
