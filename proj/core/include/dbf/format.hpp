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

#include <optional>
#include <string>
#include <string_view>

namespace dbf
{
    /// Shortest text that parses back to the same double ("nan", "inf" for non-finite values).
    std::string format_double(double value);

    /// Parses a whole string as a double; rejects trailing characters.
    std::optional<double> parse_double(std::string_view text);

    /**
     * Parses an angle in radians: a plain number, or an expression of the form
     * [k*]pi[/d] such as "pi/90", "2*pi/3" or "pi".
     */
    std::optional<double> parse_angle(std::string_view text);
}
