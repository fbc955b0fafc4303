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

#include <numbers>

#include "dbf/config.hpp"
#include "dbf/format.hpp"

using namespace dbf;

namespace
{
    std::string error_key(std::string_view text)
    {
        try
        {
            parse_config(text);
        }
        catch (const ConfigError &e)
        {
            return e.key();
        }
        return "<none>";
    }
}

TEST_CASE("parse_angle and parse_double")
{
    CHECK(parse_angle("pi/90") == std::numbers::pi / 90.0);
    CHECK(parse_angle("pi/30") == std::numbers::pi / 30.0);
    CHECK(parse_angle("pi") == std::numbers::pi);
    CHECK(*parse_angle("2*pi/3") == doctest::Approx(2.0 * std::numbers::pi / 3.0));
    CHECK(parse_angle("0.10472") == 0.10472);
    CHECK_FALSE(parse_angle("pi/0"));
    CHECK_FALSE(parse_angle("2pi"));
    CHECK_FALSE(parse_angle("pi*2"));
    CHECK_FALSE(parse_double("1.5x"));
    CHECK_FALSE(parse_double(""));
    CHECK(parse_double("+2") == 2.0);
}

TEST_CASE("format_double round-trips")
{
    for (double v : {0.1, 1.0 / 3.0, std::numbers::pi / 90.0, 1e-300, 123456789.125})
        CHECK(parse_double(format_double(v)) == v);
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("parse_config reads every key")
{
    const auto c = parse_config(R"(# Fig. 2 style setup
kind = avg-convergence
n_s = 10:50:10
trials = 40
alpha = 0.5,0.7,0.9
eps = 0.05
delta0 = pi/90
power = 2
sigma2 = 0.01
averaging-slots = 4
init = uniform
channel_policy = fixed
horizon = 500
horizon_per_ns = 100
runs = 5
seed = 99
)");
    CHECK(c.kind == ExperimentKind::AvgConvergence);
    CHECK(c.n_s_values == std::vector<std::size_t>{10, 20, 30, 40, 50});
    CHECK(c.trials == 40);
    CHECK(c.alphas == std::vector<double>{0.5, 0.7, 0.9});
    CHECK(c.eps == 0.05);
    CHECK(c.delta0 == std::numbers::pi / 90.0);
    CHECK(c.power == 2.0);
    CHECK(c.sigma2 == 0.01);
    CHECK(c.averaging_slots == 4);
    CHECK(c.init == InitMode::Kind::UniformRandom);
    CHECK(c.channel_policy == ChannelPolicy::FixedAcrossTrials);
    CHECK(c.horizon == 500u);
    CHECK(c.horizon_per_ns == 100);
    CHECK(c.runs == 5);
    CHECK(c.seed == 99);
}

TEST_CASE("defaults mirror the scaling setup")
{
    const ExperimentConfig c;
    CHECK(c.delta0 == std::numbers::pi / 90.0);
    CHECK(c.power == 1.0);
    CHECK(c.trials == 100);
    CHECK(c.init == InitMode::Kind::ZeroBeamformingPhase);
    CHECK(c.alphas == std::vector<double>{0.9});
    CHECK(c.horizon_for(50) == 10000);
}

TEST_CASE("resolved config text round-trips")
{
    ExperimentConfig c;
    c.alphas = {0.5, 0.7, 0.9};
    c.delta0 = std::numbers::pi / 30.0;
    c.sigma2 = 1.0 / 3.0;
    c.seed = 123456789012345ULL;
    const auto text = to_config_text(c);
    const auto back = parse_config(text);
    CHECK(to_config_text(back) == text);
    CHECK(back.delta0 == c.delta0);
    CHECK(back.sigma2 == c.sigma2);
    CHECK(back.horizon == std::nullopt);
    CHECK(text.find("horizon=auto\n") != std::string::npos);

    // Every key appears exactly once, in order.
    std::size_t pos = 0;
    for (auto key : config_keys())
    {
        const auto at = text.find(std::string(key) + "=", pos);
        REQUIRE(at != std::string::npos);
        pos = at + 1;
    }
}

TEST_CASE("config errors name the offending key")
{
    CHECK(error_key("bogus=1") == "bogus");
    CHECK(error_key("trials=ten") == "trials");
    CHECK(error_key("trials=-3") == "trials");
    CHECK(error_key("alpha=0.5,x") == "alpha");
    CHECK(error_key("alpha=1.5") == "alpha");
    CHECK(error_key("delta0=pi/zero") == "delta0");
    CHECK(error_key("n_s=10,5") == "n_s");
    CHECK(error_key("n_s=10:5:1") == "n_s");
    CHECK(error_key("init=random") == "init");
    CHECK(error_key("kind=fig9") == "kind");
    CHECK(error_key("seed=1\nseed=2") == "seed");
    CHECK(error_key("just words") == "");
    CHECK(error_key("seed=3") == "<none>");
    CHECK_THROWS_AS(load_config_file("/nonexistent/dbf.cfg"), ConfigError);
}

TEST_CASE("set_config_value accepts kebab-case keys")
{
    ExperimentConfig c;
    set_config_value(c, "horizon-per-ns", "50");
    set_config_value(c, "channel-policy", "fixed");
    CHECK(c.horizon_per_ns == 50);
    CHECK(c.channel_policy == ChannelPolicy::FixedAcrossTrials);
    set_config_value(c, "horizon", "12");
    set_config_value(c, "horizon", "auto");
    CHECK_FALSE(c.horizon);
}
