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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dbf/channel.hpp"

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

    // Reference magnitude through std::complex, independent of the library's accumulation.
    double reference_magnitude(const ChannelRealization &ch, const std::vector<double> &theta, double power)
    {
        std::complex<double> s = 0.0;
        for (std::size_t i = 0; i < ch.size(); ++i)
            s += std::polar(ch.gains()[i].amplitude, theta[i]);
        return std::sqrt(power) * std::abs(s);
    }

    // Mean of a Rice(nu, sigma) variable.
    double rice_mean(double nu, double sigma)
    {
        const double x = -nu * nu / (2.0 * sigma * sigma);
        const double laguerre_half =
            std::exp(x / 2.0) * ((1.0 - x) * std::cyl_bessel_i(0.0, -x / 2.0) - x * std::cyl_bessel_i(1.0, -x / 2.0));
        return sigma * std::sqrt(pi / 2.0) * laguerre_half;
    }

    // Asymptotic Kolmogorov-Smirnov p-value for a uniform [0, 2pi) sample.
    double ks_uniform_pvalue(std::vector<double> xs)
    {
        std::sort(xs.begin(), xs.end());
        const double n = static_cast<double>(xs.size());
        double d = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
        {
            const double f = xs[i] / (2.0 * pi);
            d = std::max({d, (i + 1) / n - f, f - i / n});
        }
        const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
        double q = 0.0;
        for (int k = 1; k <= 100; ++k)
            q += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        return std::clamp(q, 0.0, 1.0);
    }

    std::vector<double> random_theta(std::size_t n, Rng &rng)
    {
        std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
        std::vector<double> t(n);
        for (auto &x : t)
            x = u(rng);
        return t;
    }
}

TEST_CASE("wrap_phase maps into [0, 2pi)")
{
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(2.0 * pi) == doctest::Approx(0.0));
    CHECK(wrap_phase(-0.5) == doctest::Approx(2.0 * pi - 0.5));
    CHECK(wrap_phase(7.0 * pi) == doctest::Approx(pi));
    CHECK(wrap_phase(-1e-300) < 2.0 * pi);
    CHECK(wrap_phase(-1e-300) >= 0.0);
}

TEST_CASE("channel validation")
{
    CHECK_THROWS_AS(channel_of({}), std::invalid_argument);
    CHECK_THROWS_AS(channel_of({0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(channel_of({1.0, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(channel_of({1.0, NAN}), std::invalid_argument);
    CHECK_NOTHROW(channel_of({0.0, 1.0}));

    auto ch = channel_of({1.0, 2.0}, {-pi / 2, 5.0 * pi});
    CHECK(ch.size() == 2);
    CHECK(ch.gains()[0].phase == doctest::Approx(1.5 * pi));
    CHECK(ch.gains()[1].phase == doctest::Approx(pi));
    CHECK(ch.max_amplitude() == 2.0);
}

TEST_CASE("magnitude examples")
{
    CHECK(magnitude(channel_of({1.0}), PhaseVector({0.0}), 1.0) == 1.0);
    CHECK(magnitude(channel_of({1.0, 1.0}), PhaseVector({0.0, pi}), 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(magnitude(channel_of({2.0, 1.0}), PhaseVector({0.0, pi / 2}), 4.0) == doctest::Approx(2.0 * std::sqrt(5.0)));
    CHECK(2.0 * std::sqrt(5.0) == doctest::Approx(4.4721).epsilon(1e-4));

    const auto ch = channel_of({0.3, 1.7, 0.9, 2.2}, {0.1, 2.0, 4.0, 5.5});
    for (double c : {0.0, 1.0, 3.3, 6.0})
        CHECK(magnitude(ch, PhaseVector(std::vector<double>(4, c)), 2.5) ==
              doctest::Approx(std::sqrt(2.5) * 5.1).epsilon(1e-12));

    CHECK_THROWS_AS(magnitude(ch, PhaseVector({0.0, 0.0}), 1.0), std::invalid_argument);
}

TEST_CASE("optimal_magnitude examples and grid upper bound")
{
    CHECK(optimal_magnitude(channel_of({1, 1, 1}), 1.0) == 3.0);
    CHECK(optimal_magnitude(channel_of({0.5, 2.5}), 4.0) == 6.0);

    Rng rng(11);
    for (int rep = 0; rep < 5; ++rep)
    {
        const auto ch = generate_channel(3, rng);
        const double opt = optimal_magnitude(ch, 1.7);
        double best = 0.0;
        const int res = 90;
        for (int i = 0; i < res; ++i)
            for (int j = 0; j < res; ++j)
            {
                const std::vector<double> theta{0.0, 2 * pi * i / res, 2 * pi * j / res};
                const double m = magnitude(ch, PhaseVector(theta), 1.7);
                CHECK(m <= opt * (1 + 1e-12));
                best = std::max(best, m);
            }
        CHECK(best >= opt * (1 - pi * pi * 3 / (2.0 * res * res)));
    }
}

TEST_CASE("measure_magnitude noiseless reduction and determinism")
{
    Rng gen(3);
    const auto ch = generate_channel(20, gen);
    const PhaseVector theta(random_theta(20, gen));

    Rng rng(5);
    CHECK(measure_magnitude(ch, theta, {2.0, 0.0, 7}, rng) == magnitude(ch, theta, 2.0));

    const PowerConfig noisy{1.0, 0.3, 4};
    Rng a(99), b(99);
    CHECK(measure_magnitude(ch, theta, noisy, a) == measure_magnitude(ch, theta, noisy, b));
    CHECK(measure_magnitude(ch, theta, noisy, a) != magnitude(ch, theta, 1.0));
}

TEST_CASE("measure_magnitude approaches the Rician mean")
{
    // |S| = 2 sin(0.1) is small next to the noise, so the Rice bias is visible.
    const auto ch = channel_of({1.0, 1.0});
    const PhaseVector theta({0.0, pi - 0.2});
    const double nu = magnitude(ch, theta, 1.0);
    const double sigma2 = 0.01;
    const double sigma = std::sqrt(sigma2 / 2.0);
    const double expected = rice_mean(nu, sigma);
    REQUIRE(expected > nu);

    Rng rng(2024);
    const double est = measure_magnitude(ch, theta, {1.0, sigma2, 1'000'000}, rng);
    const double stderr_bound = sigma / std::sqrt(1e6);
    CHECK(std::abs(est - expected) < 5.0 * stderr_bound);
    CHECK(est > nu);
}

TEST_CASE("generate_channel draws CN(0,1) gains")
{
    Rng rng(7);
    double sum_sq = 0.0;
    std::vector<double> phases;
    for (int rep = 0; rep < 200; ++rep)
    {
        const auto ch = generate_channel(50, rng);
        REQUIRE(ch.size() == 50);
        for (const auto &g : ch.gains())
        {
            sum_sq += g.amplitude * g.amplitude;
            phases.push_back(g.phase);
            CHECK(g.phase >= 0.0);
            CHECK(g.phase < 2 * pi);
        }
    }
    CHECK(sum_sq / 10000.0 == doctest::Approx(1.0).epsilon(0.05));
    CHECK(ks_uniform_pvalue(phases) > 0.01);

    CHECK(generate_channel(1, rng).size() == 1);
    CHECK_THROWS_AS(generate_channel(0, rng), std::invalid_argument);
}

TEST_CASE("epsilon_region_contains examples")
{
    const auto ch = channel_of({1.0, 1.0});
    CHECK(epsilon_region_contains(ch, PhaseVector({0.4, 0.4}), 1.0, 1e-9));
    CHECK_FALSE(epsilon_region_contains(ch, PhaseVector({0.0, pi}), 1.0, 1.0));
    CHECK(2.0 * std::cos(0.05) == doctest::Approx(1.9975).epsilon(1e-4));
    CHECK(epsilon_region_contains(ch, PhaseVector({0.0, 0.1}), 1.0, 0.01));
    CHECK_THROWS_AS(epsilon_region_contains(ch, PhaseVector({0.0, 0.1}), 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("property: shift invariance, bounds, tightness, scaling")
{
    Rng rng(1234);
    std::uniform_real_distribution<double> u(0.0, 2 * pi);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    std::uniform_int_distribution<std::size_t> size(1, 60);
    for (int c = 0; c < 20; ++c)
    {
        const auto ch = generate_channel(size(rng), rng);
        const double power = scale(rng);
        const double opt = optimal_magnitude(ch, power);
        double max_dev = 0.0;
        for (int k = 0; k < 1000; ++k)
        {
            const PhaseVector theta(random_theta(ch.size(), rng));
            const double m = magnitude(ch, theta, power);
            max_dev = std::max(max_dev, std::abs(magnitude(ch, theta.shifted(u(rng)), power) - m));
            CHECK(m >= 0.0);
            CHECK(m <= opt * (1 + 1e-12));
            if (k % 100 == 0)
            {
                const double s = scale(rng);
                CHECK(magnitude(ch, theta, s * s * power) == doctest::Approx(s * m).epsilon(1e-12));
                CHECK(m == doctest::Approx(reference_magnitude(ch, std::vector<double>(theta.values().begin(), theta.values().end()), power)).epsilon(1e-12));
            }
        }
        CHECK(max_dev <= 1e-12 * opt);
        const double common = u(rng);
        CHECK(std::abs(magnitude(ch, PhaseVector(std::vector<double>(ch.size(), common)), power) - opt) <= 1e-12 * opt);
    }
}

TEST_CASE("zero-amplitude transmitters contribute nothing")
{
    const auto ch = channel_of({0.0, 1.5, 0.0});
    CHECK(optimal_magnitude(ch, 1.0) == 1.5);
    CHECK(magnitude(ch, PhaseVector({1.0, 2.0, 3.0}), 1.0) == doctest::Approx(1.5));
}
