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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dbf/channel.hpp"
#include "dbf/search.hpp"

namespace dbf
{
    enum class ExperimentKind
    {
        SamplePath,
        HittingTime,
        AvgConvergence,
    };

    enum class ChannelPolicy
    {
        FixedAcrossTrials,
        RedrawnPerTrial,
    };

    /**
     * Complete, reproducible description of one experiment.
     *
     * `alphas` holds every threshold fraction evaluated on the same trials;
     * `eps` is relative to the optimum (eps * Mag(theta*)) and selects the
     * convergence region for the verification probes. The horizon for a given
     * n_s is `horizon` when set, otherwise horizon_per_ns * n_s.
     */
    struct ExperimentConfig
    {
        ExperimentKind kind = ExperimentKind::HittingTime;
        std::vector<std::size_t> n_s_values{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
        std::size_t trials = 100;
        std::vector<double> alphas{0.9};
        double eps = 0.1;
        double delta0 = std::numbers::pi / 90.0;
        double power = 1.0;
        double sigma2 = 0.0;
        int averaging_slots = 1;
        InitMode::Kind init = InitMode::Kind::ZeroBeamformingPhase;
        ChannelPolicy channel_policy = ChannelPolicy::RedrawnPerTrial;
        std::optional<std::uint64_t> horizon;
        std::uint64_t horizon_per_ns = 200;
        std::size_t runs = 3;
        std::uint64_t seed = 1;

        /// Throws std::invalid_argument naming the offending field.
        void validate() const;
        std::uint64_t horizon_for(std::size_t n_s) const;
        PowerConfig power_config() const { return {power, sigma2, averaging_slots}; }
        PerturbationSpec perturbation() const { return {PerturbationFamily::UniformHypercube, delta0, {}}; }
        InitMode init_mode() const;
    };

    using TrajectoryObserver =
        std::function<void(std::size_t n_s, std::size_t trial, const ChannelRealization &, const Trajectory &)>;

    struct RunOptions
    {
        unsigned threads = 0; ///< 0 selects std::thread::hardware_concurrency()
        /// Called once per trajectory, serialized under a lock, in no particular order.
        TrajectoryObserver observer;
    };

    struct LinearFit
    {
        double slope = 0.0;
        double intercept = 0.0;
        double r2 = 0.0;
        std::size_t points = 0;
    };

    /// Ordinary least squares y = slope * x + intercept. Needs at least two points.
    LinearFit fit_line(std::span<const double> x, std::span<const double> y);

    struct SamplePathResult
    {
        ChannelRealization channel;
        std::vector<Trajectory> trajectories;
        std::uint64_t horizon = 0;
    };

    /// `count` runs from uniform random starts over one shared channel.
    SamplePathResult run_sample_paths(const ExperimentConfig &config, std::size_t count,
                                      const RunOptions &options = {});

    /// Mean across trajectories at each t (entry t), shorter runs padded with their last value.
    std::vector<double> mean_magnitude_curve(std::span<const Trajectory> trajectories);

    /// First t with magnitude >= threshold, if any.
    std::optional<std::size_t> first_passage_time(const Trajectory &trajectory, double threshold);

    struct HittingTimePoint
    {
        std::size_t n_s = 0;
        double alpha = 0.0;
        std::optional<std::uint64_t> hitting_time; ///< empty when unresolved within the horizon
        double threshold = 0.0;                    ///< alpha * mean optimum over the trials
        std::size_t trials = 0;
    };

    struct AlphaFit
    {
        double alpha = 0.0;
        LinearFit fit;
    };

    struct HittingTimeResult
    {
        std::vector<std::size_t> n_s_values;
        std::vector<std::vector<double>> mean_curves; ///< per n_s, entry t
        std::vector<double> mean_optimum;             ///< per n_s
        std::vector<HittingTimePoint> points;         ///< alpha-major, n_s-minor
        std::vector<AlphaFit> fits;                   ///< per alpha over resolved points
        bool any_unresolved() const;
        const HittingTimePoint &at(double alpha, std::size_t n_s) const;
    };

    /// Convergence in mean: first t with E[Mag(theta[t])] >= alpha * E[Mag(theta*)].
    HittingTimeResult estimate_hitting_time(const ExperimentConfig &config, const RunOptions &options = {});

    struct ConvergencePoint
    {
        std::size_t n_s = 0;
        double alpha = 0.0;
        double mean_time = 0.0; ///< over uncensored runs; NaN when all are censored
        double std_time = 0.0;  ///< sample standard deviation
        std::size_t trials = 0;
        std::size_t censored = 0;
        std::vector<std::uint64_t> samples; ///< first-passage times of uncensored runs, trial order
    };

    struct ConvergenceTimeResult
    {
        std::vector<ConvergencePoint> points; ///< alpha-major, n_s-minor
        std::vector<AlphaFit> fits;
        std::size_t total_censored() const;
        const ConvergencePoint &at(double alpha, std::size_t n_s) const;
    };

    /// Per-run first passage to alpha * Mag(theta*) of that run's own channel, averaged.
    ConvergenceTimeResult estimate_avg_convergence_time(const ExperimentConfig &config,
                                                        const RunOptions &options = {});
}
