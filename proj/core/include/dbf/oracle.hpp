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
#include <optional>
#include <string>
#include <vector>

#include "dbf/channel.hpp"
#include "dbf/search.hpp"

namespace dbf
{
    // Independent checks of the structural properties of the magnitude
    // objective. Nothing here calls into the search engine except to read a
    // finished Trajectory.

    struct GridSpec
    {
        std::size_t resolution = 180; ///< points per dimension, >= 8
        double radius = 0.0;          ///< L-infinity neighbourhood radius in radians; 0 means one cell

        std::size_t radius_cells() const;
    };

    inline constexpr std::size_t max_grid_transmitters = 4;
    inline constexpr double max_grid_points = 1e8;

    struct LocalMaximum
    {
        std::vector<double> theta;
        double magnitude = 0.0;
    };

    struct LocalMaxReport
    {
        std::size_t n_s = 0;
        std::size_t resolution = 0;
        std::size_t grid_points = 0;
        std::size_t strict_local_maxima = 0;
        double optimal = 0.0;
        double best_grid_magnitude = 0.0;
        std::vector<double> best_theta;
        std::vector<LocalMaximum> violations; ///< strict grid local maxima below optimal - tol

        bool passed() const noexcept { return violations.empty(); }
    };

    /**
     * Enumerates the grid over the quotient theta_1 = 0 and flags every point
     * that beats all neighbours within the radius by more than `tol` while
     * falling short of the global optimum by more than `tol`.
     *
     * Throws std::invalid_argument when n_s > 4, resolution < 8 or the grid
     * would exceed 1e8 points.
     */
    LocalMaxReport verify_local_equals_global(const ChannelRealization &channel, double power, const GridSpec &grid,
                                              double tol);

    enum class ImprovementStatus
    {
        Ok,
        InsideEpsRegion, ///< probe already within eps of the optimum; estimate meaningless
        NoImprovement,   ///< no sampled perturbation improved the magnitude
    };

    struct ImprovementEstimate
    {
        ImprovementStatus status = ImprovementStatus::Ok;
        double gamma_hat = 0.0;
        double eta_hat = 0.0;
        double improving_fraction = 0.0; ///< fraction with any strict improvement
        std::size_t samples = 0;
        std::vector<double> theta;
        std::uint64_t k0_diag = 0; ///< ceil(sqrt(P) * max a_i / (gamma_hat * eta_hat))
    };

    /**
     * Monte Carlo estimate of Pr[Mag(theta + delta) - Mag(theta) >= gamma] for
     * delta uniform on [-delta0, delta0]^n_s. Without an explicit gamma, gamma_hat
     * is the median of the strictly positive improvements.
     */
    ImprovementEstimate estimate_improvement_probability(const ChannelRealization &channel, const PhaseVector &theta,
                                                         double power, double delta0, std::optional<double> gamma,
                                                         std::size_t samples, double eps, Rng &rng);

    /// |Mag(theta + c) - Mag(theta)| for one common shift c.
    double shift_deviation(const ChannelRealization &channel, const PhaseVector &theta, double c, double power);

    inline constexpr double shift_invariance_rel_tol = 1e-12;

    struct ShiftInvarianceReport
    {
        std::size_t trials = 0;
        double max_deviation = 0.0;
        double max_relative_deviation = 0.0; ///< max_deviation / Mag(theta*)
        bool passed() const noexcept { return max_relative_deviation <= shift_invariance_rel_tol; }
    };

    ShiftInvarianceReport verify_shift_invariance(const ChannelRealization &channel, double power, std::size_t trials,
                                                  Rng &rng);

    inline constexpr double increment_rel_tol = 1e-9;

    struct MonotoneReport
    {
        bool passed = true;
        std::optional<std::size_t> first_offending_step;
        std::string reason;
        double increment_rel_error = 0.0; ///< |Mag[T] - (c0 + sum I)| / max(Mag[T], tiny)
    };

    /// Non-decreasing magnitudes, consistent bits and increments, and Mag[T] = c0 + sum I[tau].
    MonotoneReport verify_monotone_and_increment(const Trajectory &trajectory);

    // Machine-parsable key=value lines, ending with status=pass|fail where applicable.
    std::string to_key_value(const LocalMaxReport &report);
    std::string to_key_value(const ImprovementEstimate &estimate);
    std::string to_key_value(const ShiftInvarianceReport &report);
    std::string to_key_value(const MonotoneReport &report);
    const char *to_string(ImprovementStatus status) noexcept;
}
