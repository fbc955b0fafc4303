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

#include "dbf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "dbf/rng.hpp"

namespace dbf
{
    namespace
    {
        constexpr std::uint64_t fixed_channel_stream = std::numeric_limits<std::uint64_t>::max();

        // Runs fn(i) for i in [0, count) on a small worker pool. Results must be
        // written to per-index slots so the reduction stays in index order.
        template <class Fn>
        void parallel_for(std::size_t count, unsigned threads, Fn &&fn)
        {
            if (threads == 0)
                threads = std::max(1u, std::thread::hardware_concurrency());
            threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
            if (threads <= 1)
            {
                for (std::size_t i = 0; i < count; ++i)
                    fn(i);
                return;
            }
            std::atomic<std::size_t> next{0};
            std::exception_ptr error;
            std::mutex error_mutex;
            std::vector<std::jthread> pool;
            pool.reserve(threads);
            for (unsigned w = 0; w < threads; ++w)
                pool.emplace_back([&]
                                  {
                    for (std::size_t i = next++; i < count; i = next++)
                    {
                        try
                        {
                            fn(i);
                        }
                        catch (...)
                        {
                            std::lock_guard lock(error_mutex);
                            if (!error)
                                error = std::current_exception();
                            next = count;
                        }
                    } });
            pool.clear();
            if (error)
                std::rethrow_exception(error);
        }

        struct Trial
        {
            std::optional<ChannelRealization> channel;
            Trajectory trajectory;
        };

        ChannelRealization trial_channel(const ExperimentConfig &config, std::size_t n_s, Rng &trial_rng)
        {
            if (config.channel_policy == ChannelPolicy::FixedAcrossTrials)
            {
                Rng channel_rng(derive_seed(config.seed, n_s, fixed_channel_stream));
                return generate_channel(n_s, channel_rng);
            }
            return generate_channel(n_s, trial_rng);
        }

        std::vector<Trial> run_trials(const ExperimentConfig &config, std::size_t n_s, const StopRule &stop,
                                      const RunOptions &options)
        {
            std::vector<Trial> trials(config.trials);
            const auto spec = config.perturbation();
            const auto power = config.power_config();
            const auto init = config.init_mode();
            std::mutex observer_mutex;
            parallel_for(config.trials, options.threads, [&](std::size_t i)
                         {
                Rng rng(derive_seed(config.seed, n_s, i));
                auto channel = trial_channel(config, n_s, rng);
                auto traj = run_trajectory(channel, spec, power, init, stop, rng);
                if (options.observer)
                {
                    std::lock_guard lock(observer_mutex);
                    options.observer(n_s, i, channel, traj);
                }
                trials[i] = Trial{std::move(channel), std::move(traj)}; });
            return trials;
        }

        double sample_std(std::span<const double> xs, double mean)
        {
            if (xs.size() < 2)
                return 0.0;
            double ss = 0.0;
            for (double x : xs)
                ss += (x - mean) * (x - mean);
            return std::sqrt(ss / static_cast<double>(xs.size() - 1));
        }

        template <class Point, class TimeOf>
        std::vector<AlphaFit> fit_per_alpha(const std::vector<double> &alphas, const std::vector<Point> &points,
                                            TimeOf time_of)
        {
            std::vector<AlphaFit> fits;
            for (double alpha : alphas)
            {
                std::vector<double> x, y;
                for (const auto &p : points)
                    if (p.alpha == alpha)
                        if (auto t = time_of(p))
                        {
                            x.push_back(static_cast<double>(p.n_s));
                            y.push_back(*t);
                        }
                AlphaFit f{alpha, {}};
                if (x.size() >= 2)
                    f.fit = fit_line(x, y);
                else
                {
                    f.fit.slope = f.fit.intercept = f.fit.r2 = std::numeric_limits<double>::quiet_NaN();
                    f.fit.points = x.size();
                }
                fits.push_back(f);
            }
            return fits;
        }
    }

    void ExperimentConfig::validate() const
    {
        if (n_s_values.empty())
            throw std::invalid_argument("n_s: list must not be empty");
        for (std::size_t i = 0; i < n_s_values.size(); ++i)
        {
            if (n_s_values[i] < 1)
                throw std::invalid_argument("n_s: values must be >= 1");
            if (i > 0 && n_s_values[i] <= n_s_values[i - 1])
                throw std::invalid_argument("n_s: values must be strictly increasing");
        }
        if (trials < 1)
            throw std::invalid_argument("trials: must be >= 1");
        if (alphas.empty())
            throw std::invalid_argument("alpha: list must not be empty");
        for (double a : alphas)
            if (!(a > 0.0 && a <= 1.0))
                throw std::invalid_argument("alpha: values must lie in (0, 1]");
        if (!(eps > 0.0) || !std::isfinite(eps))
            throw std::invalid_argument("eps: must be > 0");
        if (!(delta0 > 0.0) || !std::isfinite(delta0))
            throw std::invalid_argument("delta0: must be > 0");
        if (!(power > 0.0) || !std::isfinite(power))
            throw std::invalid_argument("power: must be > 0");
        if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
            throw std::invalid_argument("sigma2: must be >= 0");
        if (averaging_slots < 1)
            throw std::invalid_argument("averaging_slots: must be >= 1");
        if (init == InitMode::Kind::Explicit)
            throw std::invalid_argument("init: explicit initial points are not expressible in a config");
        if (!horizon && horizon_per_ns == 0)
            throw std::invalid_argument("horizon_per_ns: must be >= 1 when horizon is auto");
        if (runs < 1)
            throw std::invalid_argument("runs: must be >= 1");
    }

    std::uint64_t ExperimentConfig::horizon_for(std::size_t n_s) const
    {
        return horizon ? *horizon : horizon_per_ns * n_s;
    }

    InitMode ExperimentConfig::init_mode() const
    {
        return init == InitMode::Kind::UniformRandom ? InitMode::uniform_random() : InitMode::zero_beamforming_phase();
    }

    LinearFit fit_line(std::span<const double> x, std::span<const double> y)
    {
        if (x.size() != y.size() || x.size() < 2)
            throw std::invalid_argument("fit_line needs two equally sized series of at least two points");
        const double n = static_cast<double>(x.size());
        const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
        const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            sxx += (x[i] - mx) * (x[i] - mx);
            sxy += (x[i] - mx) * (y[i] - my);
            syy += (y[i] - my) * (y[i] - my);
        }
        if (sxx == 0.0)
            throw std::invalid_argument("fit_line needs at least two distinct x values");
        LinearFit fit;
        fit.slope = sxy / sxx;
        fit.intercept = my - fit.slope * mx;
        fit.points = x.size();
        double sse = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            const double r = y[i] - (fit.slope * x[i] + fit.intercept);
            sse += r * r;
        }
        fit.r2 = syy == 0.0 ? (sse == 0.0 ? 1.0 : 0.0) : 1.0 - sse / syy;
        return fit;
    }

    SamplePathResult run_sample_paths(const ExperimentConfig &config, std::size_t count, const RunOptions &options)
    {
        config.validate();
        if (count < 1)
            throw std::invalid_argument("runs: must be >= 1");
        const std::size_t n_s = config.n_s_values.front();
        Rng channel_rng(derive_seed(config.seed, n_s, fixed_channel_stream));
        SamplePathResult result{generate_channel(n_s, channel_rng), {}, config.horizon_for(n_s)};
        result.trajectories.resize(count);

        const auto spec = config.perturbation();
        const auto power = config.power_config();
        const auto stop = StopRule::steps(result.horizon);
        std::mutex observer_mutex;
        parallel_for(count, options.threads, [&](std::size_t i)
                     {
            Rng rng(derive_seed(config.seed, n_s, i));
            auto traj = run_trajectory(result.channel, spec, power, InitMode::uniform_random(), stop, rng);
            if (options.observer)
            {
                std::lock_guard lock(observer_mutex);
                options.observer(n_s, i, result.channel, traj);
            }
            result.trajectories[i] = std::move(traj); });
        return result;
    }

    std::vector<double> mean_magnitude_curve(std::span<const Trajectory> trajectories)
    {
        if (trajectories.empty())
            throw std::invalid_argument("mean_magnitude_curve needs at least one trajectory");
        std::size_t length = 0;
        for (const auto &t : trajectories)
            length = std::max(length, t.step_count() + 1);
        std::vector<double> mean(length, 0.0);
        for (const auto &traj : trajectories)
        {
            const std::size_t steps = traj.step_count();
            for (std::size_t t = 0; t < length; ++t)
                mean[t] += traj.magnitude_at(std::min(t, steps));
        }
        for (auto &m : mean)
            m /= static_cast<double>(trajectories.size());
        return mean;
    }

    std::optional<std::size_t> first_passage_time(const Trajectory &trajectory, double threshold)
    {
        for (std::size_t t = 0; t <= trajectory.step_count(); ++t)
            if (trajectory.magnitude_at(t) >= threshold)
                return t;
        return std::nullopt;
    }

    bool HittingTimeResult::any_unresolved() const
    {
        return std::any_of(points.begin(), points.end(), [](const auto &p) { return !p.hitting_time; });
    }

    const HittingTimePoint &HittingTimeResult::at(double alpha, std::size_t n_s) const
    {
        for (const auto &p : points)
            if (p.alpha == alpha && p.n_s == n_s)
                return p;
        throw std::out_of_range("no hitting-time point for alpha=" + std::to_string(alpha) +
                                " n_s=" + std::to_string(n_s));
    }

    HittingTimeResult estimate_hitting_time(const ExperimentConfig &config, const RunOptions &options)
    {
        config.validate();
        HittingTimeResult result;
        result.n_s_values = config.n_s_values;
        for (std::size_t n_s : config.n_s_values)
        {
            auto trials = run_trials(config, n_s, StopRule::steps(config.horizon_for(n_s)), options);
            std::vector<Trajectory> trajectories;
            trajectories.reserve(trials.size());
            double optimum = 0.0;
            for (auto &trial : trials)
            {
                optimum += optimal_magnitude(*trial.channel, config.power);
                trajectories.push_back(std::move(trial.trajectory));
            }
            optimum /= static_cast<double>(trials.size());
            result.mean_curves.push_back(mean_magnitude_curve(trajectories));
            result.mean_optimum.push_back(optimum);
        }

        for (double alpha : config.alphas)
            for (std::size_t k = 0; k < result.n_s_values.size(); ++k)
            {
                HittingTimePoint p;
                p.n_s = result.n_s_values[k];
                p.alpha = alpha;
                p.threshold = alpha * result.mean_optimum[k];
                p.trials = config.trials;
                const double slack = threshold_rel_tol * result.mean_optimum[k];
                const auto &curve = result.mean_curves[k];
                for (std::size_t t = 0; t < curve.size(); ++t)
                    if (curve[t] >= p.threshold - slack)
                    {
                        p.hitting_time = t;
                        break;
                    }
                result.points.push_back(p);
            }

        result.fits = fit_per_alpha(config.alphas, result.points, [](const HittingTimePoint &p)
                                    { return p.hitting_time ? std::optional<double>(static_cast<double>(*p.hitting_time)) : std::nullopt; });
        return result;
    }

    std::size_t ConvergenceTimeResult::total_censored() const
    {
        std::size_t n = 0;
        for (const auto &p : points)
            n += p.censored;
        return n;
    }

    const ConvergencePoint &ConvergenceTimeResult::at(double alpha, std::size_t n_s) const
    {
        for (const auto &p : points)
            if (p.alpha == alpha && p.n_s == n_s)
                return p;
        throw std::out_of_range("no convergence point for alpha=" + std::to_string(alpha) +
                                " n_s=" + std::to_string(n_s));
    }

    ConvergenceTimeResult estimate_avg_convergence_time(const ExperimentConfig &config, const RunOptions &options)
    {
        config.validate();
        // One run per trial, stopped at the largest alpha; passage times for the
        // smaller alphas are read off the same path, which is exactly what a run
        // stopped at that alpha would have produced on the same rng stream.
        const double alpha_max = *std::max_element(config.alphas.begin(), config.alphas.end());

        std::vector<std::vector<ConvergencePoint>> by_alpha(config.alphas.size());
        for (std::size_t n_s : config.n_s_values)
        {
            const auto stop = StopRule::alpha_fraction(alpha_max, config.horizon_for(n_s));
            auto trials = run_trials(config, n_s, stop, options);
            for (std::size_t a = 0; a < config.alphas.size(); ++a)
            {
                ConvergencePoint p;
                p.n_s = n_s;
                p.alpha = config.alphas[a];
                p.trials = config.trials;
                std::vector<double> times;
                for (const auto &trial : trials)
                {
                    const double optimum = optimal_magnitude(*trial.channel, config.power);
                    const double threshold = p.alpha * optimum - threshold_rel_tol * optimum;
                    if (auto t = first_passage_time(trial.trajectory, threshold))
                    {
                        p.samples.push_back(*t);
                        times.push_back(static_cast<double>(*t));
                    }
                    else
                        ++p.censored;
                }
                if (times.empty())
                    p.mean_time = p.std_time = std::numeric_limits<double>::quiet_NaN();
                else
                {
                    p.mean_time = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
                    p.std_time = sample_std(times, p.mean_time);
                }
                by_alpha[a].push_back(std::move(p));
            }
        }

        ConvergenceTimeResult result;
        for (auto &v : by_alpha)
            for (auto &p : v)
                result.points.push_back(std::move(p));
        result.fits = fit_per_alpha(config.alphas, result.points, [](const ConvergencePoint &p)
                                    { return p.samples.empty() ? std::nullopt : std::optional<double>(p.mean_time); });
        return result;
    }
}
