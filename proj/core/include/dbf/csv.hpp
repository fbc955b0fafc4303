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
#include <iosfwd>
#include <string>

#include "dbf/channel.hpp"
#include "dbf/experiments.hpp"
#include "dbf/search.hpp"

namespace dbf
{
    /**
     * Trajectory CSV.
     *
     *   # channel_amplitudes=a_1;a_2;...
     *   # channel_phases=phi_1;phi_2;...
     *   # delta0=<radians>
     *   # power=<P>
     *   # seed=<seed>
     *   step,bit,mag,increment
     *   0,init,<initial magnitude>,0
     *   1,keep|discard,<magnitude after step>,<increment>
     *
     * Numbers use the shortest round-trip representation.
     */
    void write_trajectory_csv(std::ostream &os, const Trajectory &trajectory, const ChannelRealization &channel,
                              const PerturbationSpec &spec, const PowerConfig &power, std::uint64_t seed);

    /// step,run_id,mag; rows grouped by run, step 0 is the initial point.
    void write_sample_path_csv(std::ostream &os, const SamplePathResult &result);

    /// n_s,alpha,hitting_time,slope,intercept,r2; unresolved hitting times are written as "NA".
    void write_hitting_time_csv(std::ostream &os, const HittingTimeResult &result);

    /// n_s,alpha,mean_time,std_time,censored
    void write_avg_convergence_csv(std::ostream &os, const ConvergenceTimeResult &result);

    const char *to_string(FeedbackBit bit) noexcept;
}
