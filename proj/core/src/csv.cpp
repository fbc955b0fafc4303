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

#include "dbf/csv.hpp"

#include <ostream>

#include "dbf/format.hpp"

namespace dbf
{
    const char *to_string(FeedbackBit bit) noexcept
    {
        return bit == FeedbackBit::Keep ? "keep" : "discard";
    }

    namespace
    {
        const AlphaFit *find_fit(const std::vector<AlphaFit> &fits, double alpha)
        {
            for (const auto &f : fits)
                if (f.alpha == alpha)
                    return &f;
            return nullptr;
        }
    }

    void write_trajectory_csv(std::ostream &os, const Trajectory &trajectory, const ChannelRealization &channel,
                              const PerturbationSpec &spec, const PowerConfig &power, std::uint64_t seed)
    {
        os << "# channel_amplitudes=";
        for (std::size_t i = 0; i < channel.size(); ++i)
            os << (i ? ";" : "") << format_double(channel.gains()[i].amplitude);
        os << "\n# channel_phases=";
        for (std::size_t i = 0; i < channel.size(); ++i)
            os << (i ? ";" : "") << format_double(channel.gains()[i].phase);
        os << "\n# delta0=" << format_double(spec.delta0) << "\n# power=" << format_double(power.power)
           << "\n# seed=" << seed << "\n";
        os << "step,bit,mag,increment\n";
        os << "0,init," << format_double(trajectory.initial_mag) << ",0\n";
        for (std::size_t k = 0; k < trajectory.step_count(); ++k)
            os << k + 1 << ',' << to_string(trajectory.bits[k]) << ',' << format_double(trajectory.magnitudes[k])
               << ',' << format_double(trajectory.increments[k]) << '\n';
    }

    void write_sample_path_csv(std::ostream &os, const SamplePathResult &result)
    {
        os << "step,run_id,mag\n";
        for (std::size_t r = 0; r < result.trajectories.size(); ++r)
        {
            const auto &traj = result.trajectories[r];
            for (std::size_t t = 0; t <= traj.step_count(); ++t)
                os << t << ',' << r << ',' << format_double(traj.magnitude_at(t)) << '\n';
        }
    }

    void write_hitting_time_csv(std::ostream &os, const HittingTimeResult &result)
    {
        os << "n_s,alpha,hitting_time,slope,intercept,r2\n";
        for (const auto &p : result.points)
        {
            os << p.n_s << ',' << format_double(p.alpha) << ',';
            if (p.hitting_time)
                os << *p.hitting_time;
            else
                os << "NA";
            const AlphaFit *f = find_fit(result.fits, p.alpha);
            os << ',' << format_double(f ? f->fit.slope : 0.0) << ',' << format_double(f ? f->fit.intercept : 0.0)
               << ',' << format_double(f ? f->fit.r2 : 0.0) << '\n';
        }
    }

    void write_avg_convergence_csv(std::ostream &os, const ConvergenceTimeResult &result)
    {
        os << "n_s,alpha,mean_time,std_time,censored\n";
        for (const auto &p : result.points)
            os << p.n_s << ',' << format_double(p.alpha) << ',' << format_double(p.mean_time) << ','
               << format_double(p.std_time) << ',' << p.censored << '\n';
    }
}
