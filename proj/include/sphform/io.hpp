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
#include <ostream>

namespace sphform {

// Nine significant digits; negative zero prints as 0.
std::string format_number(double v);
std::string json_string(const std::string& s);

void write_trajectory_csv(std::ostream& out, const FollowerResult& f);
void write_events_jsonl(std::ostream& out, const std::vector<LogEntry>& events);
void write_summary_json(std::ostream& out, const ScenarioConfig& cfg, std::size_t follower, const FollowerResult& f);

// <dir>/follower_<n>/{trajectory.csv, events.jsonl, summary.json}, n from 1.
void write_run_outputs(const std::filesystem::path& dir, const ScenarioConfig& cfg, const ScenarioResult& res);

}  // namespace sphform
