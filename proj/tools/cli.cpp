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

#include "cli.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dbf/channel.hpp"
#include "dbf/config.hpp"
#include "dbf/csv.hpp"
#include "dbf/oracle.hpp"
#include "dbf/rng.hpp"

namespace dbf::cli
{
    namespace
    {
        struct VerifyOptions
        {
            std::string check = "all";
            std::size_t pairs = 1000;
            std::size_t resolution = 180;
            std::size_t grid_n_s = 3;
            std::size_t probes = 20;
            std::size_t samples = 100000;
        };

        struct RunOutcome
        {
            std::vector<OutputFile> files;
            std::string summary;
            int status = exit_ok;
        };

        std::string kebab(std::string_view key)
        {
            std::string k(key);
            std::replace(k.begin(), k.end(), '_', '-');
            return k;
        }

        template <class Fn>
        std::string render(Fn &&fn)
        {
            std::ostringstream os;
            fn(os);
            return os.str();
        }

        RunOutcome run_sample_path(const ExperimentConfig &config)
        {
            const auto result = run_sample_paths(config, config.runs);
            RunOutcome out;
            out.files.push_back({"sample_path.csv", render([&](auto &os) { write_sample_path_csv(os, result); })});
            const double optimum = optimal_magnitude(result.channel, config.power);
            std::size_t reached = 0;
            for (std::size_t r = 0; r < result.trajectories.size(); ++r)
            {
                const auto &traj = result.trajectories[r];
                out.files.push_back({"trajectory_" + std::to_string(r) + ".csv", render([&](auto &os)
                                                                                        { write_trajectory_csv(os, traj, result.channel, config.perturbation(), config.power_config(), derive_seed(config.seed, result.channel.size(), r)); })});
                reached += traj.magnitude_at(traj.step_count()) > optimum * (1.0 - config.eps);
            }
            out.summary = "sample-path: " + std::to_string(result.trajectories.size()) + " runs, n_s=" +
                          std::to_string(result.channel.size()) + ", horizon=" + std::to_string(result.horizon) +
                          ", " + std::to_string(reached) + " inside the eps region at the horizon";
            return out;
        }

        RunOutcome run_hitting_time(const ExperimentConfig &config)
        {
            const auto result = estimate_hitting_time(config);
            RunOutcome out;
            out.files.push_back({"hitting_time.csv", render([&](auto &os) { write_hitting_time_csv(os, result); })});
            std::size_t unresolved = 0;
            for (const auto &p : result.points)
                unresolved += !p.hitting_time;
            std::ostringstream s;
            s << "hitting-time: " << config.n_s_values.size() << " n_s x " << config.alphas.size() << " alpha, "
              << unresolved << " unresolved";
            for (const auto &f : result.fits)
                s << ", alpha=" << f.alpha << " r2=" << f.fit.r2;
            out.summary = s.str();
            out.status = unresolved ? exit_runtime_flag : exit_ok;
            return out;
        }

        RunOutcome run_avg_convergence(const ExperimentConfig &config)
        {
            const auto result = estimate_avg_convergence_time(config);
            RunOutcome out;
            out.files.push_back(
                {"avg_convergence.csv", render([&](auto &os) { write_avg_convergence_csv(os, result); })});
            std::ostringstream s;
            s << "avg-convergence: " << config.n_s_values.size() << " n_s x " << config.alphas.size() << " alpha, "
              << result.total_censored() << " censored";
            for (const auto &f : result.fits)
                s << ", alpha=" << f.alpha << " r2=" << f.fit.r2;
            out.summary = s.str();
            out.status = result.total_censored() ? exit_runtime_flag : exit_ok;
            return out;
        }

        RunOutcome run_verify(const ExperimentConfig &config, const VerifyOptions &opt)
        {
            static const std::vector<std::string> known{"shift-invariance", "local-global", "improvement", "monotone"};
            std::vector<std::string> checks;
            if (opt.check == "all")
                checks = known;
            else if (std::find(known.begin(), known.end(), opt.check) != known.end())
                checks = {opt.check};
            else
                throw ConfigError("check", "unknown check '" + opt.check + "'");

            const std::size_t n_s = config.n_s_values.front();
            const auto channel_for = [&](std::size_t n)
            {
                Rng rng(derive_seed(config.seed, n, ~std::uint64_t{0}));
                return generate_channel(n, rng);
            };

            std::string report;
            std::size_t failed = 0;
            for (const auto &check : checks)
            {
                const auto stream = static_cast<std::uint64_t>(std::find(known.begin(), known.end(), check) - known.begin());
                Rng rng(derive_seed(config.seed, n_s, stream));
                if (check == "shift-invariance")
                {
                    const auto r = verify_shift_invariance(channel_for(n_s), config.power, opt.pairs, rng);
                    report += to_key_value(r);
                    failed += !r.passed();
                }
                else if (check == "local-global")
                {
                    const auto channel = channel_for(opt.grid_n_s);
                    const double tol = 1e-9 * optimal_magnitude(channel, config.power);
                    const auto r = verify_local_equals_global(channel, config.power, {opt.resolution, 0.0}, tol);
                    report += to_key_value(r);
                    failed += !r.passed();
                }
                else if (check == "improvement")
                {
                    const auto channel = channel_for(n_s);
                    const double eps = config.eps * optimal_magnitude(channel, config.power);
                    std::uniform_real_distribution<double> uniform(0.0, two_pi);
                    for (std::size_t p = 0; p < opt.probes; ++p)
                    {
                        std::vector<double> theta(n_s);
                        do
                            for (auto &t : theta)
                                t = uniform(rng);
                        while (epsilon_region_contains(channel, PhaseVector(theta), config.power, eps));
                        const auto e = estimate_improvement_probability(channel, PhaseVector(theta), config.power,
                                                                        config.delta0, std::nullopt, opt.samples,
                                                                        eps, rng);
                        report += "probe=" + std::to_string(p) + "\n" + to_key_value(e);
                        failed += !(e.status == ImprovementStatus::Ok && e.eta_hat > 0.0);
                    }
                }
                else if (check == "monotone")
                {
                    const auto channel = channel_for(n_s);
                    const auto traj = run_trajectory(channel, config.perturbation(), config.power_config(),
                                                     config.init_mode(), StopRule::steps(config.horizon_for(n_s)), rng);
                    MonotoneReport r;
                    if (config.sigma2 > 0.0)
                        r.reason = "skipped: noisy measurement";
                    else
                        r = verify_monotone_and_increment(traj);
                    report += to_key_value(r);
                    failed += !r.passed;
                }
            }
            RunOutcome out;
            out.files.push_back({"verify.txt", report});
            out.summary = "verify: " + std::to_string(checks.size()) + " check(s), " + std::to_string(failed) +
                          " failure(s)";
            out.status = failed ? exit_runtime_flag : exit_ok;
            return out;
        }
    }

    int parse_and_dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"One-bit feedback distributed beamforming simulator"};
        app.require_subcommand(1, 1);

        std::string config_path;
        std::string outdir = "dbf_out";
        std::map<std::string, std::string> overrides;
        VerifyOptions verify_opt;

        std::vector<CLI::App *> subs;
        const auto add_common = [&](CLI::App *sub, bool writes_output)
        {
            sub->add_option("--config", config_path, "key=value config file");
            if (writes_output)
                sub->add_option("--out", outdir, "output directory");
            for (auto key : config_keys())
                sub->add_option("--" + kebab(key), overrides[std::string(key)],
                                "override config key '" + std::string(key) + "'");
            subs.push_back(sub);
        };
        add_common(app.add_subcommand("sample-path", "sample paths over one channel"), true);
        add_common(app.add_subcommand("hitting-time", "hitting time (convergence in mean) vs n_s"), true);
        add_common(app.add_subcommand("avg-convergence", "average first-passage time vs n_s"), true);
        auto *verify = app.add_subcommand("verify", "oracle checks on the magnitude objective");
        add_common(verify, true);
        verify->add_option("--check", verify_opt.check, "shift-invariance|local-global|improvement|monotone|all");
        verify->add_option("--pairs", verify_opt.pairs, "random (theta, c) pairs for shift invariance");
        verify->add_option("--resolution", verify_opt.resolution, "grid points per dimension");
        verify->add_option("--grid-n-s", verify_opt.grid_n_s, "transmitters in the grid check (<= 4)");
        verify->add_option("--probes", verify_opt.probes, "probe points for the improvement check");
        verify->add_option("--samples", verify_opt.samples, "perturbations per probe");
        add_common(app.add_subcommand("show-config", "print the resolved config"), false);

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::CallForHelp &)
        {
            out << app.help();
            return exit_ok;
        }
        catch (const CLI::ParseError &e)
        {
            err << "error: " << e.what() << "\n";
            return exit_config_error;
        }

        CLI::App *sub = app.get_subcommands().front();
        const std::string name = sub->get_name();

        ExperimentConfig config;
        try
        {
            if (!config_path.empty())
                config = load_config_file(config_path, false);
            for (auto key : config_keys())
                if (sub->count("--" + kebab(key)) > 0)
                    set_config_value(config, key, overrides[std::string(key)]);
            if (name == "sample-path")
                config.kind = ExperimentKind::SamplePath;
            else if (name == "hitting-time")
                config.kind = ExperimentKind::HittingTime;
            else if (name == "avg-convergence")
                config.kind = ExperimentKind::AvgConvergence;
            check_config(config);
        }
        catch (const ConfigError &e)
        {
            err << "config error [" << (e.key().empty() ? "syntax" : e.key()) << "]: " << e.what() << "\n";
            return exit_config_error;
        }

        if (name == "show-config")
        {
            out << to_config_text(config);
            return exit_ok;
        }

        try
        {
            RunOutcome outcome;
            if (name == "sample-path")
                outcome = run_sample_path(config);
            else if (name == "hitting-time")
                outcome = run_hitting_time(config);
            else if (name == "avg-convergence")
                outcome = run_avg_convergence(config);
            else
                outcome = run_verify(config, verify_opt);
            emit_reproduction_bundle(config, outcome.files, outdir);
            out << outcome.summary << " -> " << outdir << "\n";
            return outcome.status;
        }
        catch (const ConfigError &e)
        {
            err << "config error [" << e.key() << "]: " << e.what() << "\n";
            return exit_config_error;
        }
        catch (const std::exception &e)
        {
            err << "error: " << e.what() << "\n";
            return exit_runtime_flag;
        }
    }
}
