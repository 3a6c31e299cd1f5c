/*
 * Copyright 2026 The sphform Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "sphform/types.hpp"

#include <vector>

namespace sphform {

struct Event {
    enum class Kind : std::uint8_t { Actuation, Detection, External };

    Kind kind = Kind::External;
    ControlLabel label = ControlLabel::Hold;  // Actuation only
    RegionIndex from{}, to{};                 // Detection only, crossed-from first

    static Event actuation(ControlLabel l) { return {Kind::Actuation, l, {}, {}}; }
    static Event detection(RegionIndex from, RegionIndex to) { return {Kind::Detection, ControlLabel::Hold, from, to}; }
    static Event collision_alarm() { return {}; }

    bool controllable() const { return kind == Kind::Actuation; }
    bool is_detection() const { return kind == Kind::Detection; }

    friend auto operator<=>(const Event&, const Event&) = default;
};

// "C_r-", "d([8,13,5],[7,13,5])", "ca"
std::string to_string(const Event& e);
std::string to_string(const std::vector<Event>& s);  // space separated, "<eps>" if empty

}  // namespace sphform
