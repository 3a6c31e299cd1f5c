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

#include "sphform/runtime.hpp"

#include <cstdint>

namespace sphform {

struct LeaderModel {
    enum class Kind { Static, Circle };
    Kind kind = Kind::Static;
    Vec3 position = Vec3::Zero();  // Static
    // Circle: horizontal circle at z = altitude_m around center (x, y).
    double diameter_m = 0.0;
    double altitude_m = 0.0;
    double period_s = 1.0;
    Vec3 center = Vec3::Zero();
    double phase = 0.0;

    Vec3 position_at(double t) const;
    Vec3 velocity_at(double t) const;
    double speed() const;
};

struct FollowerConfig {
    Vec3 initial_offset = Vec3::Zero();  // relative to the desired position
    Vec3 desired_offset = Vec3::Zero();  // relative to the leader
    double v_max = 5.0;
};

struct ScenarioConfig {
    std::string name;
    PartitionSpec partition;
    double step_s = 0.01;
    double duration_s = 60.0;
    std::uint64_t seed = 1;
    LeaderModel leader;
    std::vector<FollowerConfig> followers;
    SynthesisOptions synthesis;
    std::optional<Perturbation> perturbation;
};

// Throws InvalidSpec naming the offending key.
void validate(const ScenarioConfig& cfg);

Vec3 relative_state(const Vec3& follower, const Vec3& leader, const Vec3& desired_offset);

// Raises ca while the leader sits inward of the follower in the same (j, k)
// column. Latched until the follower's j index changes.
class CollisionMonitor {
  public:
    CollisionMonitor(const Partition& p, const Vec3& leader_relative);

    bool triggered(const RegionIndex& follower) const;
    bool poll(const RegionIndex& follower);

    const std::optional<RegionIndex>& leader_region() const { return leader_; }
    bool latched() const { return latched_; }

  private:
    std::optional<RegionIndex> leader_;
    bool latched_ = false;
    int latched_j_ = 0;
};

// Automata shared by every follower on one partition.
struct ScenarioModel {
    Partition partition;
    des::PlantModel plant;
    des::Supervisor formation, collision;
    des::ClosedLoop closed_loop;
};

ScenarioModel build_model(const PartitionSpec& spec);

struct WorldSample {
    TrajectorySample rel;
    Vec3 absolute = Vec3::Zero();
    Vec3 leader = Vec3::Zero();
};

struct FollowerResult {
    std::vector<WorldSample> trajectory;
    std::vector<LogEntry> events;
    RunOutcome outcome;
    double min_inter_agent_distance_m = 0.0;
    std::optional<RegionIndex> leader_region;
    bool monitor_triggered = false;  // trigger condition held at some poll
};

struct ScenarioResult {
    std::vector<FollowerResult> followers;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);
ScenarioResult run_scenario(const ScenarioConfig& cfg, const ScenarioModel& model);

}  // namespace sphform
