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

#include "dbf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dbf/format.hpp"

namespace dbf
{
    std::size_t GridSpec::radius_cells() const
    {
        if (radius <= 0.0)
            return 1;
        const double cell = two_pi / static_cast<double>(resolution);
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(radius / cell + 1e-9)));
    }

    LocalMaxReport verify_local_equals_global(const ChannelRealization &channel, double power, const GridSpec &grid,
                                              double tol)
    {
        const std::size_t n_s = channel.size();
        const std::size_t res = grid.resolution;
        if (n_s > max_grid_transmitters)
            throw std::invalid_argument("grid oracle supports at most 4 transmitters");
        if (res < 8)
            throw std::invalid_argument("grid resolution must be >= 8");
        const std::size_t dims = n_s - 1;
        if (std::pow(static_cast<double>(res), static_cast<double>(dims)) > max_grid_points)
            throw std::invalid_argument("grid too large: resolution^(n_s-1) exceeds 1e8 points");

        std::size_t points = 1;
        for (std::size_t d = 0; d < dims; ++d)
            points *= res;

        // Phasor table for theta = 2*pi*k/res; transmitter 1 is pinned at theta = 0.
        std::vector<std::complex<double>> phasor(res);
        for (std::size_t k = 0; k < res; ++k)
            phasor[k] = std::polar(1.0, two_pi * static_cast<double>(k) / static_cast<double>(res));
        const auto gains = channel.gains();
        const double scale = std::sqrt(power);

        std::vector<double> mag(points);
        std::vector<std::size_t> digits(dims);
        for (std::size_t idx = 0; idx < points; ++idx)
        {
            std::complex<double> sum(gains[0].amplitude, 0.0);
            std::size_t rem = idx;
            for (std::size_t d = 0; d < dims; ++d)
            {
                sum += gains[d + 1].amplitude * phasor[rem % res];
                rem /= res;
            }
            mag[idx] = scale * std::abs(sum);
        }

        LocalMaxReport report;
        report.n_s = n_s;
        report.resolution = res;
        report.grid_points = points;
        report.optimal = scale * channel.amplitude_sum();

        const auto theta_of = [&](std::size_t idx)
        {
            std::vector<double> theta(n_s, 0.0);
            for (std::size_t d = 0; d < dims; ++d)
            {
                theta[d + 1] = two_pi * static_cast<double>(idx % res) / static_cast<double>(res);
                idx /= res;
            }
            return theta;
        };

        const auto best = std::max_element(mag.begin(), mag.end());
        report.best_grid_magnitude = *best;
        report.best_theta = theta_of(static_cast<std::size_t>(best - mag.begin()));

        // Neighbour offsets in [-r, r]^dims minus the origin.
        const long r = static_cast<long>(std::min(grid.radius_cells(), res / 2));
        std::vector<std::vector<long>> offsets;
        if (dims > 0)
        {
            std::vector<long> off(dims, -r);
            while (true)
            {
                if (std::any_of(off.begin(), off.end(), [](long v) { return v != 0; }))
                    offsets.push_back(off);
                std::size_t d = 0;
                while (d < dims && off[d] == r)
                    off[d++] = -r;
                if (d == dims)
                    break;
                ++off[d];
            }
        }

        const long lres = static_cast<long>(res);
        for (std::size_t idx = 0; idx < points; ++idx)
        {
            if (dims == 0)
                break;
            std::size_t rem = idx;
            for (std::size_t d = 0; d < dims; ++d)
            {
                digits[d] = rem % res;
                rem /= res;
            }
            bool strict_max = true;
            for (const auto &off : offsets)
            {
                std::size_t nidx = 0;
                std::size_t stride = 1;
                for (std::size_t d = 0; d < dims; ++d)
                {
                    const long v = ((static_cast<long>(digits[d]) + off[d]) % lres + lres) % lres;
                    nidx += static_cast<std::size_t>(v) * stride;
                    stride *= res;
                }
                if (nidx != idx && !(mag[idx] > mag[nidx] + tol))
                {
                    strict_max = false;
                    break;
                }
            }
            if (!strict_max)
                continue;
            ++report.strict_local_maxima;
            if (mag[idx] < report.optimal - tol)
                report.violations.push_back({theta_of(idx), mag[idx]});
        }
        return report;
    }

    ImprovementEstimate estimate_improvement_probability(const ChannelRealization &channel, const PhaseVector &theta,
                                                         double power, double delta0, std::optional<double> gamma,
                                                         std::size_t samples, double eps, Rng &rng)
    {
        if (!(delta0 > 0.0))
            throw std::invalid_argument("delta0 must be > 0");
        if (samples == 0)
            throw std::invalid_argument("samples must be >= 1");
        if (gamma && !(*gamma > 0.0))
            throw std::invalid_argument("gamma must be > 0");

        ImprovementEstimate est;
        est.samples = samples;
        est.theta.assign(theta.values().begin(), theta.values().end());
        if (epsilon_region_contains(channel, theta, power, eps))
        {
            est.status = ImprovementStatus::InsideEpsRegion;
            return est;
        }

        const double base = magnitude(channel, theta, power);
        std::uniform_real_distribution<double> uniform(-delta0, delta0);
        std::vector<double> improvements;
        improvements.reserve(samples);
        std::vector<double> delta(theta.size());
        std::size_t positive = 0;
        for (std::size_t s = 0; s < samples; ++s)
        {
            for (auto &d : delta)
                d = uniform(rng);
            const double gain = magnitude(channel, theta.perturbed(delta), power) - base;
            improvements.push_back(gain);
            positive += gain > 0.0;
        }
        est.improving_fraction = static_cast<double>(positive) / static_cast<double>(samples);

        if (gamma)
            est.gamma_hat = *gamma;
        else
        {
            std::vector<double> pos;
            pos.reserve(positive);
            for (double g : improvements)
                if (g > 0.0)
                    pos.push_back(g);
            if (pos.empty())
            {
                est.status = ImprovementStatus::NoImprovement;
                return est;
            }
            const auto mid = pos.begin() + static_cast<std::ptrdiff_t>(pos.size() / 2);
            std::nth_element(pos.begin(), mid, pos.end());
            est.gamma_hat = *mid;
        }

        std::size_t hits = 0;
        for (double g : improvements)
            hits += g >= est.gamma_hat;
        est.eta_hat = static_cast<double>(hits) / static_cast<double>(samples);
        if (hits == 0)
        {
            est.status = ImprovementStatus::NoImprovement;
            return est;
        }
        est.k0_diag = static_cast<std::uint64_t>(
            std::ceil(std::sqrt(power) * channel.max_amplitude() / (est.gamma_hat * est.eta_hat)));
        return est;
    }

    double shift_deviation(const ChannelRealization &channel, const PhaseVector &theta, double c, double power)
    {
        return std::abs(magnitude(channel, theta.shifted(c), power) - magnitude(channel, theta, power));
    }

    ShiftInvarianceReport verify_shift_invariance(const ChannelRealization &channel, double power, std::size_t trials,
                                                  Rng &rng)
    {
        if (trials == 0)
            throw std::invalid_argument("trials must be >= 1");
        std::uniform_real_distribution<double> uniform(0.0, two_pi);
        ShiftInvarianceReport report;
        report.trials = trials;
        std::vector<double> theta(channel.size());
        for (std::size_t t = 0; t < trials; ++t)
        {
            for (auto &x : theta)
                x = uniform(rng);
            const double c = uniform(rng);
            report.max_deviation = std::max(report.max_deviation, shift_deviation(channel, PhaseVector(theta), c, power));
        }
        report.max_relative_deviation = report.max_deviation / optimal_magnitude(channel, power);
        return report;
    }

    MonotoneReport verify_monotone_and_increment(const Trajectory &trajectory)
    {
        MonotoneReport report;
        const auto fail = [&](std::size_t step, std::string reason)
        {
            report.passed = false;
            report.first_offending_step = step;
            report.reason = std::move(reason);
            return report;
        };

        const std::size_t steps = trajectory.step_count();
        if (trajectory.bits.size() != steps || trajectory.increments.size() != steps)
            return fail(0, "trajectory columns differ in length");

        double sum = 0.0;
        for (std::size_t tau = 1; tau <= steps; ++tau)
        {
            const double prev = trajectory.magnitude_at(tau - 1);
            const double cur = trajectory.magnitude_at(tau);
            const double inc = trajectory.increments[tau - 1];
            const double scale = std::max({std::abs(prev), std::abs(cur), std::numeric_limits<double>::min()});
            if (cur < prev)
                return fail(tau, "magnitude decreased");
            if (trajectory.bits[tau - 1] == FeedbackBit::Discard && (cur != prev || inc != 0.0))
                return fail(tau, "discard changed the magnitude");
            if (std::abs(inc - std::max(cur - prev, 0.0)) > increment_rel_tol * scale)
                return fail(tau, "increment does not match the magnitude change");
            sum += inc;
        }

        const double final_mag = trajectory.magnitude_at(steps);
        report.increment_rel_error = std::abs(final_mag - (trajectory.initial_mag + sum)) /
                                     std::max(std::abs(final_mag), std::numeric_limits<double>::min());
        if (report.increment_rel_error > increment_rel_tol)
            return fail(steps, "telescoping identity violated");
        return report;
    }

    const char *to_string(ImprovementStatus status) noexcept
    {
        switch (status)
        {
        case ImprovementStatus::Ok:
            return "ok";
        case ImprovementStatus::InsideEpsRegion:
            return "inside-eps-region";
        case ImprovementStatus::NoImprovement:
            return "no-improvement";
        }
        return "?";
    }

    namespace
    {
        std::string join(const std::vector<double> &v)
        {
            std::string out;
            for (std::size_t i = 0; i < v.size(); ++i)
                out += (i ? ";" : "") + format_double(v[i]);
            return out;
        }
    }

    std::string to_key_value(const LocalMaxReport &r)
    {
        std::ostringstream os;
        os << "check=local-global\n"
           << "n_s=" << r.n_s << "\nresolution=" << r.resolution << "\ngrid_points=" << r.grid_points
           << "\nstrict_local_maxima=" << r.strict_local_maxima << "\noptimal=" << format_double(r.optimal)
           << "\nbest_grid_magnitude=" << format_double(r.best_grid_magnitude) << "\nbest_theta=" << join(r.best_theta)
           << "\nviolations=" << r.violations.size() << "\n";
        for (std::size_t i = 0; i < r.violations.size(); ++i)
            os << "violation." << i << "=" << join(r.violations[i].theta) << "@"
               << format_double(r.violations[i].magnitude) << "\n";
        os << "status=" << (r.passed() ? "pass" : "fail") << "\n";
        return os.str();
    }

    std::string to_key_value(const ImprovementEstimate &e)
    {
        std::ostringstream os;
        os << "check=improvement\nimprovement_status=" << to_string(e.status) << "\nsamples=" << e.samples
           << "\ngamma_hat=" << format_double(e.gamma_hat) << "\neta_hat=" << format_double(e.eta_hat)
           << "\nimproving_fraction=" << format_double(e.improving_fraction) << "\nk0_diag=" << e.k0_diag
           << "\nstatus=" << (e.status == ImprovementStatus::Ok && e.eta_hat > 0.0 && e.gamma_hat > 0.0 ? "pass" : "fail")
           << "\n";
        return os.str();
    }

    std::string to_key_value(const ShiftInvarianceReport &r)
    {
        std::ostringstream os;
        os << "check=shift-invariance\ntrials=" << r.trials << "\nmax_deviation=" << format_double(r.max_deviation)
           << "\nmax_relative_deviation=" << format_double(r.max_relative_deviation)
           << "\ntolerance=" << format_double(shift_invariance_rel_tol) << "\nstatus=" << (r.passed() ? "pass" : "fail")
           << "\n";
        return os.str();
    }

    std::string to_key_value(const MonotoneReport &r)
    {
        std::ostringstream os;
        os << "check=monotone\nincrement_rel_error=" << format_double(r.increment_rel_error) << "\n";
        if (r.first_offending_step)
            os << "first_offending_step=" << *r.first_offending_step << "\nreason=" << r.reason << "\n";
        os << "status=" << (r.passed ? "pass" : "fail") << "\n";
        return os.str();
    }
}
