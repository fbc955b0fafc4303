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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dbf/oracle.hpp"

using namespace dbf;
using std::numbers::pi;

namespace
{
    ChannelRealization channel_of(std::vector<double> a, std::vector<double> phi = {})
    {
        if (phi.empty())
            phi.assign(a.size(), 0.0);
        return ChannelRealization::from_amplitudes(a, phi);
    }
}

TEST_CASE("local = global on the quotient grid")
{
    SUBCASE("two equal transmitters, resolution 720")
    {
        const auto ch = channel_of({1.0, 1.0});
        const auto r = verify_local_equals_global(ch, 1.0, {720, 0.0}, 1e-9 * 2.0);
        CHECK(r.passed());
        CHECK(r.grid_points == 720);
        CHECK(r.strict_local_maxima == 1);
        CHECK(r.best_theta == std::vector<double>{0.0, 0.0});
        CHECK(r.best_grid_magnitude == doctest::Approx(2.0));
        // theta = [0, pi] sits at the global minimum and is never flagged.
        for (const auto &v : r.violations)
            CHECK(v.theta[1] != doctest::Approx(pi));
    }

    SUBCASE("three unequal transmitters, resolution 180")
    {
        const auto ch = channel_of({1.0, 2.0, 0.5});
        const auto r = verify_local_equals_global(ch, 1.0, {180, 0.0}, 1e-9 * 3.5);
        CHECK(r.passed());
        CHECK(r.grid_points == 180 * 180);
        CHECK(r.best_grid_magnitude == doctest::Approx(3.5));
    }

    SUBCASE("random channels satisfy the grid quantization bound")
    {
        Rng rng(31);
        for (std::size_t n_s : {2u, 3u, 4u})
            for (int rep = 0; rep < 3; ++rep)
            {
                const auto ch = generate_channel(n_s, rng);
                const std::size_t res = n_s == 4 ? 40 : 120;
                const double opt = optimal_magnitude(ch, 1.0);
                const auto r = verify_local_equals_global(ch, 1.0, {res, 0.0}, 1e-9 * opt);
                CHECK(r.passed());
                CHECK(r.best_grid_magnitude >= opt * (1 - pi * pi * n_s / (2.0 * res * res)));
            }
    }

    SUBCASE("a single transmitter has nothing to check")
    {
        const auto r = verify_local_equals_global(channel_of({2.0}), 1.0, {16, 0.0}, 1e-9);
        CHECK(r.passed());
        CHECK(r.grid_points == 1);
    }

    SUBCASE("wider neighbourhoods")
    {
        GridSpec g{90, 3.0 * two_pi / 90.0};
        CHECK(g.radius_cells() == 3);
        const auto r = verify_local_equals_global(channel_of({1.0, 0.4, 0.7}), 1.0, g, 1e-9);
        CHECK(r.passed());
    }

    SUBCASE("grid limits")
    {
        CHECK_THROWS_AS(verify_local_equals_global(channel_of({1, 1, 1, 1, 1}), 1.0, {8, 0.0}, 1e-9),
                        std::invalid_argument);
        CHECK_THROWS_AS(verify_local_equals_global(channel_of({1, 1}), 1.0, {4, 0.0}, 1e-9), std::invalid_argument);
        CHECK_THROWS_AS(verify_local_equals_global(channel_of({1, 1, 1, 1}), 1.0, {1000, 0.0}, 1e-9),
                        std::invalid_argument);
    }
}

TEST_CASE("improvement probability estimate")
{
    const auto ch = channel_of({1.0, 1.0});
    Rng rng(12);

    const auto e = estimate_improvement_probability(ch, PhaseVector({0.0, pi / 2}), 1.0, pi / 30, std::nullopt,
                                                    100000, 0.01, rng);
    CHECK(e.status == ImprovementStatus::Ok);
    CHECK(e.gamma_hat > 0.0);
    CHECK(e.eta_hat > 0.0);
    CHECK(e.eta_hat <= 1.0);
    CHECK(e.eta_hat <= e.improving_fraction);
    // The median of the positive improvements splits them in half.
    CHECK(e.eta_hat == doctest::Approx(e.improving_fraction / 2).epsilon(0.01));
    CHECK(e.k0_diag == static_cast<std::uint64_t>(std::ceil(1.0 / (e.gamma_hat * e.eta_hat))));

    const auto aligned = estimate_improvement_probability(ch, PhaseVector({1.0, 1.0}), 1.0, pi / 30, std::nullopt,
                                                          1000, 0.01, rng);
    CHECK(aligned.status == ImprovementStatus::InsideEpsRegion);

    const auto fixed = estimate_improvement_probability(ch, PhaseVector({0.0, pi / 2}), 1.0, pi / 30, 1e-6, 10000,
                                                        0.01, rng);
    CHECK(fixed.gamma_hat == 1e-6);
    CHECK(fixed.eta_hat <= 1.0);
    CHECK(fixed.eta_hat > 0.3);

    const auto impossible = estimate_improvement_probability(ch, PhaseVector({0.0, pi / 2}), 1.0, pi / 30, 10.0,
                                                             1000, 0.01, rng);
    CHECK(impossible.status == ImprovementStatus::NoImprovement);
    CHECK(impossible.eta_hat == 0.0);

    CHECK_THROWS_AS(estimate_improvement_probability(ch, PhaseVector({0.0, 1.0}), 1.0, 0.0, std::nullopt, 10, 0.1, rng),
                    std::invalid_argument);
}

TEST_CASE("eta_hat concentrates as samples double")
{
    const auto ch = channel_of({1.0, 0.8, 0.6});
    const PhaseVector theta({0.0, 2.0, 4.0});
    const double gamma = 1e-3;
    const std::size_t samples = 2000;
    int within = 0;
    const int repeats = 200;
    for (int k = 0; k < repeats; ++k)
    {
        Rng a(1000 + k), b(5000 + k);
        const auto e1 = estimate_improvement_probability(ch, theta, 1.0, pi / 30, gamma, samples, 0.1, a);
        const auto e2 = estimate_improvement_probability(ch, theta, 1.0, pi / 30, gamma, 2 * samples, 0.1, b);
        const double bound = 3.0 * std::sqrt(e1.eta_hat * (1 - e1.eta_hat) / samples);
        within += std::abs(e2.eta_hat - e1.eta_hat) < bound;
    }
    CHECK(within >= 0.99 * repeats);
}

TEST_CASE("shift invariance")
{
    Rng rng(50);
    const auto ch = generate_channel(50, rng);
    const PhaseVector theta(std::vector<double>(50, 0.7));
    CHECK(shift_deviation(ch, theta, 0.0, 1.0) == 0.0);
    CHECK(shift_deviation(ch, theta, two_pi, 1.0) <= 1e-12 * optimal_magnitude(ch, 1.0));

    const auto r = verify_shift_invariance(ch, 1.0, 1000, rng);
    CHECK(r.trials == 1000);
    CHECK(r.passed());
    CHECK(r.max_relative_deviation <= 1e-12);
    CHECK(to_key_value(r).find("status=pass\n") != std::string::npos);
    CHECK_THROWS_AS(verify_shift_invariance(ch, 1.0, 0, rng), std::invalid_argument);
}

TEST_CASE("monotone and increment verification")
{
    SUBCASE("a one-bit trajectory passes")
    {
        Rng rng(2);
        const auto ch = generate_channel(12, rng);
        const auto t = run_trajectory(ch, PerturbationSpec{}, PowerConfig{}, InitMode::uniform_random(),
                                      StopRule::steps(5000), rng);
        const auto r = verify_monotone_and_increment(t);
        CHECK(r.passed);
        CHECK(r.increment_rel_error <= 1e-9);
    }

    SUBCASE("a decreasing accepted step fails at that index")
    {
        Trajectory t;
        t.initial_mag = 1.0;
        t.magnitudes = {1.2, 1.2, 1.1, 1.5};
        t.increments = {0.2, 0.0, 0.0, 0.4};
        t.bits = {FeedbackBit::Keep, FeedbackBit::Discard, FeedbackBit::Keep, FeedbackBit::Keep};
        const auto r = verify_monotone_and_increment(t);
        CHECK_FALSE(r.passed);
        CHECK(r.first_offending_step == 3u);
        CHECK(to_key_value(r).find("first_offending_step=3\n") != std::string::npos);
    }

    SUBCASE("a wrong increment breaks the identity")
    {
        Trajectory t;
        t.initial_mag = 1.0;
        t.magnitudes = {1.2};
        t.increments = {0.3};
        t.bits = {FeedbackBit::Keep};
        CHECK_FALSE(verify_monotone_and_increment(t).passed);
    }

    SUBCASE("zero steps pass vacuously")
    {
        Trajectory t;
        t.initial_mag = 2.0;
        CHECK(verify_monotone_and_increment(t).passed);
    }
}

TEST_CASE("reports are key=value lines")
{
    const auto r = verify_local_equals_global(channel_of({1.0, 1.0}), 1.0, {64, 0.0}, 1e-9);
    const auto text = to_key_value(r);
    std::size_t lines = 0;
    for (std::size_t pos = 0; (pos = text.find('\n', pos)) != std::string::npos; ++pos)
        ++lines;
    CHECK(lines > 3);
    CHECK(text.rfind("check=local-global\n", 0) == 0);
    CHECK(text.find("violations=0\n") != std::string::npos);
    CHECK(text.find("status=pass\n") != std::string::npos);
}
