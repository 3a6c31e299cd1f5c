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

#include "sphform/scenario.hpp"

#include <filesystem>

namespace sphform {

// Malformed or invalid scenario file. key is the dotted path of the
// offending entry ("followers[0].v_max"), empty for syntax errors.
class ConfigError : public Error {
  public:
    ConfigError(std::string key, const std::string& what)
        : Error(key.empty() || what.rfind(key, 0) == 0 ? what : key + ": " + what), key(std::move(key)) {}
    std::string key;
};

// Parses and validates a JSON scenario. Unknown keys are rejected.
//
//   partition  {radius_m, n_r, n_theta, n_phi}
//   sim        {step_s, duration_s, seed}
//   leader     {model: "static", position} |
//              {model: "circle", diameter_m, altitude_m, period_s, center, phase}
//   followers  [{initial_offset, desired_offset | leader_region, v_max}]
//   options    {eligible_set_mode: "derived"|"paper", kappa, verify_samples,
//               perturbation: {time_s, offset}}
//
// leader_region [i, j, k] places the leader at that region's centroid in the
// follower's relative frame (desired_offset = -centroid).
ScenarioConfig parse_config(const std::string& text, const std::string& name = "");
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace sphform
