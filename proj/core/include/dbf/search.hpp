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
#include <stdexcept>
#include <vector>

#include "dbf/channel.hpp"
#include "dbf/rng.hpp"

namespace dbf
{
    /// Raised when a pluggable decision map accepts a point that lowers the objective.
    class ContractViolation : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };

    enum class PerturbationFamily
    {
        UniformHypercube,
    };

    /**
     * Sampling measure for the random perturbation delta[t].
     *
     * The uniform hypercube draws each component i.i.d. on [-d, d] where d is
     * delta0, or schedule[t - 1] when a per-step schedule is present (the last
     * schedule entry holds for all later steps).
     */
    struct PerturbationSpec
    {
        PerturbationFamily family = PerturbationFamily::UniformHypercube;
        double delta0 = std::numbers::pi / 90.0;
        std::vector<double> schedule;

        double half_width(std::uint64_t step_index) const;
        void validate() const;
    };

    enum class FeedbackBit : std::uint8_t
    {
        Discard = 0,
        Keep = 1,
    };

    struct SearchState
    {
        PhaseVector theta;
        double current_mag = 0.0;
        std::uint64_t step_index = 0;
    };

    /**
     * Starting point of a search.
     *
     * ZeroBeamformingPhase sets psi[0] = 0, so theta[0] equals the channel
     * phases; this is the "origin" of the beamforming-phase space.
     */
    struct InitMode
    {
        enum class Kind
        {
            ZeroBeamformingPhase,
            UniformRandom,
            Explicit,
        };
        Kind kind = Kind::ZeroBeamformingPhase;
        std::vector<double> theta;

        static InitMode zero_beamforming_phase() { return {}; }
        static InitMode uniform_random() { return {Kind::UniformRandom, {}}; }
        static InitMode explicit_theta(std::vector<double> theta) { return {Kind::Explicit, std::move(theta)}; }
    };

    SearchState init_state(const ChannelRealization &channel, const InitMode &mode,
                           const PowerConfig &power, Rng &rng);

    /// n_s i.i.d. draws on [-d(t), d(t)] for the step being taken.
    std::vector<double> sample_perturbation(const PerturbationSpec &spec, std::size_t n_s,
                                            std::uint64_t step_index, Rng &rng);

    struct StepResult
    {
        SearchState state;
        FeedbackBit bit = FeedbackBit::Discard;
        double increment = 0.0;
        PhaseVector proposed;
    };

    using StepFunction = std::function<StepResult(const SearchState &, const ChannelRealization &,
                                                  const PerturbationSpec &, const PowerConfig &, Rng &)>;

    /// Accept predicate on (current magnitude, proposed magnitude).
    using AcceptPredicate = std::function<bool(double current, double proposed)>;

    /**
     * Wraps an accept predicate into a step function with the same sampling and
     * bookkeeping as one_bit_step. In noiseless mode an accept that lowers the
     * magnitude throws ContractViolation.
     */
    StepFunction plug_decision_map(AcceptPredicate accept);

    /// One slot of the one-bit feedback scheme: keep iff proposed > current (strict).
    StepResult one_bit_step(const SearchState &state, const ChannelRealization &channel,
                            const PerturbationSpec &spec, const PowerConfig &power, Rng &rng);

    // Relative slack applied to alpha thresholds so an exactly aligned point
    // counts as reaching alpha = 1 despite rounding in the magnitude sum.
    inline constexpr double threshold_rel_tol = 1e-12;

    struct StopRule
    {
        enum class Kind
        {
            MaxSteps,
            EpsRegion,
            AlphaFraction,
        };
        Kind kind = Kind::MaxSteps;
        double threshold = 0.0; ///< eps for EpsRegion, alpha for AlphaFraction
        std::uint64_t max_steps = 0;

        static StopRule steps(std::uint64_t t) { return {Kind::MaxSteps, 0.0, t}; }
        static StopRule eps_region(double eps, std::uint64_t horizon) { return {Kind::EpsRegion, eps, horizon}; }
        static StopRule alpha_fraction(double alpha, std::uint64_t horizon) { return {Kind::AlphaFraction, alpha, horizon}; }
    };

    enum class StopOutcome
    {
        Completed,      ///< MaxSteps rule ran to its step count
        Converged,      ///< convergence rule fired
        HorizonReached, ///< convergence rule never fired within max_steps
    };

    struct TrajectoryOptions
    {
        bool record_phases = false;
    };

    /**
     * Time-indexed record of one search run, stored column-wise. Step tau
     * (1-based) lives at index tau - 1 of each column; proposed/accepted are
     * filled only when phases were recorded.
     */
    struct Trajectory
    {
        PhaseVector initial_theta;
        double initial_mag = 0.0;
        std::vector<FeedbackBit> bits;
        std::vector<double> magnitudes;
        std::vector<double> increments;
        std::vector<PhaseVector> proposed;
        std::vector<PhaseVector> accepted;
        PhaseVector final_theta;
        StopOutcome outcome = StopOutcome::Completed;

        std::size_t step_count() const noexcept { return magnitudes.size(); }
        /// Magnitude after step t; t = 0 is the initial point.
        double magnitude_at(std::size_t t) const { return t == 0 ? initial_mag : magnitudes.at(t - 1); }
        /// Hitting step when outcome is Converged.
        std::optional<std::size_t> first_passage() const;
    };

    /**
     * Iterates a step function until the stop rule fires. Convergence rules are
     * evaluated on the noiseless magnitude of the accepted point, including at
     * t = 0, so a run that starts inside the target has zero steps.
     */
    Trajectory run_trajectory(const ChannelRealization &channel, const PerturbationSpec &spec,
                              const PowerConfig &power, const InitMode &init, const StopRule &stop,
                              Rng &rng, const TrajectoryOptions &options = {},
                              const StepFunction &step = one_bit_step);
}
