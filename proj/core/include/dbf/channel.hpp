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

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "dbf/rng.hpp"

namespace dbf
{
    inline constexpr double two_pi = 2.0 * std::numbers::pi;

    /// Reduces an angle to the canonical range [0, 2*pi).
    double wrap_phase(double angle) noexcept;

    /// Fading gain of one transmitter, h_i = amplitude * exp(j * phase).
    struct ChannelGain
    {
        double amplitude;
        double phase;
    };

    /**
     * Slow-fading channel from n_s single-antenna transmitters to one receiver.
     *
     * Amplitudes are nonnegative with at least one strictly positive entry;
     * phases are stored wrapped to [0, 2*pi). Zero-amplitude transmitters are
     * accepted, they simply do not contribute to the received sum.
     */
    class ChannelRealization
    {
    public:
        /// Throws std::invalid_argument on an empty, all-zero, negative or non-finite gain list.
        explicit ChannelRealization(std::vector<ChannelGain> gains);

        static ChannelRealization from_amplitudes(std::span<const double> amplitudes,
                                                  std::span<const double> phases);

        std::span<const ChannelGain> gains() const noexcept { return gains_; }
        std::size_t size() const noexcept { return gains_.size(); }
        double max_amplitude() const noexcept;
        double amplitude_sum() const noexcept;

    private:
        std::vector<ChannelGain> gains_;
    };

    /// Total received phases theta_i = phi_i + psi_i, kept in [0, 2*pi).
    class PhaseVector
    {
    public:
        PhaseVector() = default;
        explicit PhaseVector(std::vector<double> theta);
        static PhaseVector zeros(std::size_t n) { return PhaseVector(std::vector<double>(n, 0.0)); }

        std::span<const double> values() const noexcept { return theta_; }
        std::size_t size() const noexcept { return theta_.size(); }
        double operator[](std::size_t i) const { return theta_[i]; }

        /// Componentwise theta + delta, wrapped.
        PhaseVector perturbed(std::span<const double> delta) const;
        /// theta + c for every component, wrapped.
        PhaseVector shifted(double c) const;

        friend bool operator==(const PhaseVector &, const PhaseVector &) = default;

    private:
        std::vector<double> theta_;
    };

    struct PowerConfig
    {
        double power = 1.0;
        double noise_variance = 0.0;
        int averaging_slots = 1;

        bool noiseless() const noexcept { return noise_variance == 0.0; }
        /// Throws std::invalid_argument when P <= 0, sigma2 < 0 or K < 1.
        void validate() const;
    };

    /// sqrt(P) * |sum_i a_i exp(j theta_i)|. Throws std::invalid_argument on a length mismatch.
    double magnitude(const ChannelRealization &channel, const PhaseVector &theta, double power);

    /// Global maximum sqrt(P) * sum_i a_i, attained when all theta_i coincide.
    double optimal_magnitude(const ChannelRealization &channel, double power);

    // Noisy estimate: mean over K slots of |sqrt(P) sum a_i e^{j theta_i} + w_k|,
    // w_k ~ CN(0, sigma2). Returns magnitude() bit-for-bit when sigma2 == 0 and
    // then does not touch the engine.
    double measure_magnitude(const ChannelRealization &channel, const PhaseVector &theta,
                             const PowerConfig &power, Rng &rng);

    /// n_s i.i.d. CN(0,1) gains.
    ChannelRealization generate_channel(std::size_t n_s, Rng &rng);

    /// True iff magnitude > optimal_magnitude - eps. Throws std::invalid_argument unless eps > 0.
    bool epsilon_region_contains(const ChannelRealization &channel, const PhaseVector &theta,
                                 double power, double eps);
}
