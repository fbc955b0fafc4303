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

#include "dbf/search.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dbf
{
    double PerturbationSpec::half_width(std::uint64_t step_index) const
    {
        if (schedule.empty())
            return delta0;
        const std::uint64_t idx = step_index == 0 ? 0 : step_index - 1;
        return schedule[std::min<std::uint64_t>(idx, schedule.size() - 1)];
    }

    void PerturbationSpec::validate() const
    {
        if (!(delta0 > 0.0) || !std::isfinite(delta0))
            throw std::invalid_argument("delta0 must be > 0");
        for (double d : schedule)
            if (!(d > 0.0) || !std::isfinite(d))
                throw std::invalid_argument("every delta0 schedule entry must be > 0");
    }

    SearchState init_state(const ChannelRealization &channel, const InitMode &mode,
                           const PowerConfig &power, Rng &rng)
    {
        power.validate();
        std::vector<double> theta(channel.size());
        switch (mode.kind)
        {
        case InitMode::Kind::ZeroBeamformingPhase:
            for (std::size_t i = 0; i < theta.size(); ++i)
                theta[i] = channel.gains()[i].phase;
            break;
        case InitMode::Kind::UniformRandom:
        {
            std::uniform_real_distribution<double> uniform(0.0, two_pi);
            for (auto &t : theta)
                t = uniform(rng);
            break;
        }
        case InitMode::Kind::Explicit:
            if (mode.theta.size() != channel.size())
                throw std::invalid_argument("explicit initial point has " + std::to_string(mode.theta.size()) +
                                            " phases, channel has " + std::to_string(channel.size()));
            theta = mode.theta;
            break;
        }
        SearchState state;
        state.theta = PhaseVector(std::move(theta));
        state.current_mag = measure_magnitude(channel, state.theta, power, rng);
        return state;
    }

    std::vector<double> sample_perturbation(const PerturbationSpec &spec, std::size_t n_s,
                                            std::uint64_t step_index, Rng &rng)
    {
        const double d = spec.half_width(step_index);
        std::uniform_real_distribution<double> uniform(-d, d);
        std::vector<double> delta(n_s);
        for (auto &x : delta)
            x = uniform(rng);
        return delta;
    }

    namespace
    {
        template <class Accept>
        StepResult generic_step(const Accept &accept, bool enforce_monotone, const SearchState &state,
                                const ChannelRealization &channel, const PerturbationSpec &spec,
                                const PowerConfig &power, Rng &rng)
        {
            const std::uint64_t t = state.step_index + 1;
            const auto delta = sample_perturbation(spec, channel.size(), t, rng);

            StepResult out;
            out.proposed = state.theta.perturbed(delta);
            const double proposed_mag = measure_magnitude(channel, out.proposed, power, rng);

            if (accept(state.current_mag, proposed_mag))
            {
                if (enforce_monotone && power.noiseless() && proposed_mag < state.current_mag)
                    throw ContractViolation("decision map accepted a decrease at step " + std::to_string(t) + ": " +
                                            std::to_string(state.current_mag) + " -> " +
                                            std::to_string(proposed_mag));
                out.state.theta = out.proposed;
                out.state.current_mag = proposed_mag;
                out.bit = FeedbackBit::Keep;
                out.increment = std::max(proposed_mag - state.current_mag, 0.0);
            }
            else
            {
                out.state.theta = state.theta;
                out.state.current_mag = state.current_mag;
                out.bit = FeedbackBit::Discard;
                out.increment = 0.0;
            }
            out.state.step_index = t;
            return out;
        }

        struct StrictlyGreater
        {
            bool operator()(double current, double proposed) const { return proposed > current; }
        };
    }

    StepResult one_bit_step(const SearchState &state, const ChannelRealization &channel,
                            const PerturbationSpec &spec, const PowerConfig &power, Rng &rng)
    {
        return generic_step(StrictlyGreater{}, false, state, channel, spec, power, rng);
    }

    StepFunction plug_decision_map(AcceptPredicate accept)
    {
        if (!accept)
            throw std::invalid_argument("decision map predicate is empty");
        return [accept = std::move(accept)](const SearchState &state, const ChannelRealization &channel,
                                            const PerturbationSpec &spec, const PowerConfig &power, Rng &rng)
        { return generic_step(accept, true, state, channel, spec, power, rng); };
    }

    std::optional<std::size_t> Trajectory::first_passage() const
    {
        if (outcome != StopOutcome::Converged)
            return std::nullopt;
        return step_count();
    }

    Trajectory run_trajectory(const ChannelRealization &channel, const PerturbationSpec &spec,
                              const PowerConfig &power, const InitMode &init, const StopRule &stop,
                              Rng &rng, const TrajectoryOptions &options, const StepFunction &step)
    {
        spec.validate();
        power.validate();
        if (stop.kind == StopRule::Kind::AlphaFraction && !(stop.threshold > 0.0 && stop.threshold <= 1.0))
            throw std::invalid_argument("alpha must lie in (0, 1]");
        if (stop.kind == StopRule::Kind::EpsRegion && !(stop.threshold > 0.0))
            throw std::invalid_argument("eps must be > 0");

        const double optimum = optimal_magnitude(channel, power.power);
        auto converged = [&](const SearchState &s)
        {
            const double mag = power.noiseless() ? s.current_mag : magnitude(channel, s.theta, power.power);
            switch (stop.kind)
            {
            case StopRule::Kind::EpsRegion:
                return mag > optimum - stop.threshold;
            case StopRule::Kind::AlphaFraction:
                return mag >= stop.threshold * optimum - threshold_rel_tol * optimum;
            case StopRule::Kind::MaxSteps:
                break;
            }
            return false;
        };

        SearchState state = init_state(channel, init, power, rng);
        Trajectory traj;
        traj.initial_theta = state.theta;
        traj.initial_mag = state.current_mag;

        const bool convergence_rule = stop.kind != StopRule::Kind::MaxSteps;
        traj.outcome = convergence_rule ? StopOutcome::HorizonReached : StopOutcome::Completed;
        if (convergence_rule && converged(state))
            traj.outcome = StopOutcome::Converged;

        const std::size_t reserve = static_cast<std::size_t>(std::min<std::uint64_t>(stop.max_steps, 1u << 20));
        traj.magnitudes.reserve(reserve);
        traj.increments.reserve(reserve);
        traj.bits.reserve(reserve);

        while (traj.outcome != StopOutcome::Converged && state.step_index < stop.max_steps)
        {
            StepResult r = step(state, channel, spec, power, rng);
            traj.bits.push_back(r.bit);
            traj.magnitudes.push_back(r.state.current_mag);
            traj.increments.push_back(r.increment);
            if (options.record_phases)
            {
                traj.proposed.push_back(std::move(r.proposed));
                traj.accepted.push_back(r.state.theta);
            }
            state = std::move(r.state);
            if (convergence_rule && converged(state))
                traj.outcome = StopOutcome::Converged;
        }
        traj.final_theta = std::move(state.theta);
        return traj;
    }
}
