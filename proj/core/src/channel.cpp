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

#include "dbf/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace dbf
{
    double wrap_phase(double angle) noexcept
    {
        double r = std::fmod(angle, two_pi);
        if (r < 0.0)
            r += two_pi;
        // r + 2*pi can round up to exactly 2*pi for tiny negative inputs
        if (r >= two_pi)
            r = 0.0;
        return r;
    }

    ChannelRealization::ChannelRealization(std::vector<ChannelGain> gains) : gains_(std::move(gains))
    {
        if (gains_.empty())
            throw std::invalid_argument("channel must have at least one transmitter");
        bool any_positive = false;
        for (std::size_t i = 0; i < gains_.size(); ++i)
        {
            auto &g = gains_[i];
            if (!std::isfinite(g.amplitude) || g.amplitude < 0.0)
                throw std::invalid_argument("channel amplitude " + std::to_string(i) + " must be finite and >= 0");
            if (!std::isfinite(g.phase))
                throw std::invalid_argument("channel phase " + std::to_string(i) + " must be finite");
            g.phase = wrap_phase(g.phase);
            any_positive = any_positive || g.amplitude > 0.0;
        }
        if (!any_positive)
            throw std::invalid_argument("channel has no transmitter with positive amplitude");
    }

    ChannelRealization ChannelRealization::from_amplitudes(std::span<const double> amplitudes,
                                                           std::span<const double> phases)
    {
        if (amplitudes.size() != phases.size())
            throw std::invalid_argument("amplitude and phase lists differ in length");
        std::vector<ChannelGain> gains(amplitudes.size());
        for (std::size_t i = 0; i < gains.size(); ++i)
            gains[i] = {amplitudes[i], phases[i]};
        return ChannelRealization(std::move(gains));
    }

    double ChannelRealization::max_amplitude() const noexcept
    {
        double m = 0.0;
        for (const auto &g : gains_)
            m = std::max(m, g.amplitude);
        return m;
    }

    double ChannelRealization::amplitude_sum() const noexcept
    {
        double s = 0.0;
        for (const auto &g : gains_)
            s += g.amplitude;
        return s;
    }

    PhaseVector::PhaseVector(std::vector<double> theta) : theta_(std::move(theta))
    {
        for (auto &t : theta_)
        {
            if (!std::isfinite(t))
                throw std::invalid_argument("phase must be finite");
            t = wrap_phase(t);
        }
    }

    PhaseVector PhaseVector::perturbed(std::span<const double> delta) const
    {
        if (delta.size() != theta_.size())
            throw std::invalid_argument("perturbation length does not match phase vector");
        PhaseVector out;
        out.theta_.resize(theta_.size());
        for (std::size_t i = 0; i < theta_.size(); ++i)
            out.theta_[i] = wrap_phase(theta_[i] + delta[i]);
        return out;
    }

    PhaseVector PhaseVector::shifted(double c) const
    {
        PhaseVector out;
        out.theta_.resize(theta_.size());
        for (std::size_t i = 0; i < theta_.size(); ++i)
            out.theta_[i] = wrap_phase(theta_[i] + c);
        return out;
    }

    void PowerConfig::validate() const
    {
        if (!(power > 0.0) || !std::isfinite(power))
            throw std::invalid_argument("power must be > 0");
        if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance))
            throw std::invalid_argument("noise variance must be >= 0");
        if (averaging_slots < 1)
            throw std::invalid_argument("averaging_slots must be >= 1");
    }

    namespace
    {
        std::complex<double> received_sum(const ChannelRealization &channel, const PhaseVector &theta)
        {
            if (theta.size() != channel.size())
                throw std::invalid_argument("phase vector has " + std::to_string(theta.size()) +
                                            " entries, channel has " + std::to_string(channel.size()));
            double re = 0.0;
            double im = 0.0;
            auto gains = channel.gains();
            for (std::size_t i = 0; i < gains.size(); ++i)
            {
                re += gains[i].amplitude * std::cos(theta[i]);
                im += gains[i].amplitude * std::sin(theta[i]);
            }
            return {re, im};
        }
    }

    double magnitude(const ChannelRealization &channel, const PhaseVector &theta, double power)
    {
        return std::sqrt(power) * std::abs(received_sum(channel, theta));
    }

    double optimal_magnitude(const ChannelRealization &channel, double power)
    {
        return std::sqrt(power) * channel.amplitude_sum();
    }

    double measure_magnitude(const ChannelRealization &channel, const PhaseVector &theta,
                             const PowerConfig &power, Rng &rng)
    {
        if (power.noiseless())
            return magnitude(channel, theta, power.power);

        const std::complex<double> signal = std::sqrt(power.power) * received_sum(channel, theta);
        std::normal_distribution<double> component(0.0, std::sqrt(power.noise_variance / 2.0));
        double acc = 0.0;
        for (int k = 0; k < power.averaging_slots; ++k)
        {
            const double wr = component(rng);
            const double wi = component(rng);
            acc += std::abs(signal + std::complex<double>(wr, wi));
        }
        return acc / power.averaging_slots;
    }

    ChannelRealization generate_channel(std::size_t n_s, Rng &rng)
    {
        if (n_s == 0)
            throw std::invalid_argument("n_s must be >= 1");
        std::normal_distribution<double> component(0.0, std::sqrt(0.5));
        std::vector<ChannelGain> gains(n_s);
        for (auto &g : gains)
        {
            const double re = component(rng);
            const double im = component(rng);
            g = {std::hypot(re, im), wrap_phase(std::atan2(im, re))};
        }
        // A CN(0,1) draw is exactly zero with probability zero; the constructor still guards it.
        return ChannelRealization(std::move(gains));
    }

    bool epsilon_region_contains(const ChannelRealization &channel, const PhaseVector &theta,
                                 double power, double eps)
    {
        if (!(eps > 0.0))
            throw std::invalid_argument("eps must be > 0");
        return magnitude(channel, theta, power) > optimal_magnitude(channel, power) - eps;
    }
}
