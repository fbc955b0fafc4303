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

#include "dbf/format.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace dbf
{
    std::string format_double(double value)
    {
        if (std::isnan(value))
            return "nan";
        if (std::isinf(value))
            return value > 0 ? "inf" : "-inf";
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
        return std::string(buf, end);
    }

    std::optional<double> parse_double(std::string_view text)
    {
        if (text.empty())
            return std::nullopt;
        if (text.front() == '+')
            text.remove_prefix(1);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            return std::nullopt;
        return value;
    }

    std::optional<double> parse_angle(std::string_view text)
    {
        const auto pos = text.find("pi");
        if (pos == std::string_view::npos)
            return parse_double(text);

        double factor = 1.0;
        auto head = text.substr(0, pos);
        if (!head.empty())
        {
            if (head.back() != '*')
                return std::nullopt;
            auto k = parse_double(head.substr(0, head.size() - 1));
            if (!k)
                return std::nullopt;
            factor = *k;
        }
        double divisor = 1.0;
        auto tail = text.substr(pos + 2);
        if (!tail.empty())
        {
            if (tail.front() != '/')
                return std::nullopt;
            auto d = parse_double(tail.substr(1));
            if (!d || *d == 0.0)
                return std::nullopt;
            divisor = *d;
        }
        return factor * std::numbers::pi / divisor;
    }
}
