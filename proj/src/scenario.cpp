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

#include "sphform/scenario.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace sphform {

Vec3 LeaderModel::position_at(double t) const {
    if (kind == Kind::Static) return position;
    const double w = kTwoPi / period_s, a = w * t + phase, rad = 0.5 * diameter_m;
    return center + Vec3(rad * std::cos(a), rad * std::sin(a), altitude_m);
}

Vec3 LeaderModel::velocity_at(double t) const {
    if (kind == Kind::Static) return Vec3::Zero();
    const double w = kTwoPi / period_s, a = w * t + phase, rad = 0.5 * diameter_m;
    return {-rad * w * std::sin(a), rad * w * std::cos(a), 0.0};
}

double LeaderModel::speed() const { return kind == Kind::Static ? 0.0 : kPi * diameter_m / period_s; }

void validate(const ScenarioConfig& cfg) {
    try {
        cfg.partition.validate();
    } catch (const InvalidSpec& e) {
        throw InvalidSpec(std::string("partition: ") + e.what());
    }
    if (!(cfg.step_s > 0.0) || !std::isfinite(cfg.step_s)) throw InvalidSpec("sim.step_s must be positive");
    if (!(cfg.duration_s > 0.0) || !std::isfinite(cfg.duration_s))
        throw InvalidSpec("sim.duration_s must be positive");
    if (cfg.leader.kind == LeaderModel::Kind::Circle) {
        if (!(cfg.leader.diameter_m > 0.0)) throw InvalidSpec("leader.diameter_m must be positive");
        if (!(cfg.leader.period_s > 0.0)) throw InvalidSpec("leader.period_s must be positive");
    }
    if (cfg.followers.empty()) throw InvalidSpec("followers: at least one follower is required");
    if (!(cfg.synthesis.kappa > 0.0 && cfg.synthesis.kappa <= 1.0))
        throw InvalidSpec("options.kappa must lie in (0, 1]");

    const Partition p(cfg.partition);
    for (std::size_t n = 0; n < cfg.followers.size(); ++n) {
        const FollowerConfig& f = cfg.followers[n];
        const std::string key = "followers[" + std::to_string(n) + "]";
        if (!(f.v_max >= 0.0) || !std::isfinite(f.v_max)) throw InvalidSpec(key + ".v_max must be non-negative");
        if (!(f.initial_offset.norm() < cfg.partition.radius_m))
            throw InvalidSpec(key + ".initial_offset lies outside the control horizon");
        const double ls = cfg.leader.speed();
        if (ls > 0.0 && !(ls < f.v_max))
            throw InvalidSpec(key + ".v_max must exceed the leader speed " + std::to_string(ls) + " m/s");
        try {
            validate_step(p, f.v_max, cfg.step_s);
        } catch (const InvalidSpec& e) {
            throw InvalidSpec(e.what() + std::string(" (") + key + ")");
        }
    }
}

Vec3 relative_state(const Vec3& follower, const Vec3& leader, const Vec3& desired_offset) {
    return follower - (leader + desired_offset);
}

CollisionMonitor::CollisionMonitor(const Partition& p, const Vec3& leader_relative) {
    if (leader_relative.norm() < p.spec().radius_m) leader_ = p.region_of(leader_relative);
}

bool CollisionMonitor::triggered(const RegionIndex& f) const {
    return leader_ && f.i != 1 && leader_->j == f.j && leader_->k == f.k && leader_->i < f.i;
}

bool CollisionMonitor::poll(const RegionIndex& f) {
    if (latched_ && f.j != latched_j_) latched_ = false;
    if (latched_ || !triggered(f)) return false;
    latched_ = true;
    latched_j_ = f.j;
    return true;
}

ScenarioModel build_model(const PartitionSpec& spec) {
    ScenarioModel m{Partition(spec), des::build_plant(spec), {}, {}, {}};
    m.formation = des::build_formation_supervisor(m.plant);
    m.collision = des::build_collision_supervisor(m.plant);
    m.closed_loop = des::closed_loop(m.plant, m.formation, m.collision);
    return m;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    validate(cfg);
    return run_scenario(cfg, build_model(cfg.partition));
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const ScenarioModel& model) {
    validate(cfg);
    const std::size_t n = cfg.followers.size();

    // One controller cache per distinct speed bound.
    std::map<double, std::unique_ptr<ControllerCache>> caches;
    for (const FollowerConfig& f : cfg.followers)
        if (!caches.count(f.v_max))
            caches[f.v_max] = std::make_unique<ControllerCache>(model.partition, SpeedBound{f.v_max}, cfg.synthesis);

    RunConfig rc;
    rc.step_s = cfg.step_s;
    rc.duration_s = cfg.duration_s;
    rc.perturbation = cfg.perturbation;

    std::vector<CollisionMonitor> monitors;
    std::vector<char> triggered(n, 0);
    monitors.reserve(n);
    for (const FollowerConfig& f : cfg.followers) monitors.emplace_back(model.partition, -f.desired_offset);

    std::vector<std::unique_ptr<HybridRunner>> runners;
    for (std::size_t k = 0; k < n; ++k) {
        const FollowerConfig& f = cfg.followers[k];
        ExternalSource ext = [&monitors, &triggered, k](double, const RegionIndex& r) {
            if (monitors[k].triggered(r)) triggered[k] = 1;
            return monitors[k].poll(r);
        };
        runners.push_back(std::make_unique<HybridRunner>(model.partition, model.plant, model.closed_loop,
                                                         *caches.at(f.v_max), rc, f.initial_offset, ext));
    }

    // Lockstep on the shared clock, ordered by follower index.
    bool running = true;
    while (running) {
        running = false;
        for (auto& r : runners) {
            if (r->done()) continue;
            r->step();
            running = true;
        }
    }

    ScenarioResult res;
    for (std::size_t k = 0; k < n; ++k) {
        const FollowerConfig& f = cfg.followers[k];
        const HybridRunner& r = *runners[k];
        FollowerResult fr;
        fr.events = r.events();
        fr.outcome = r.outcome();
        fr.leader_region = monitors[k].leader_region();
        fr.monitor_triggered = triggered[k] != 0;
        fr.min_inter_agent_distance_m = std::numeric_limits<double>::infinity();
        fr.trajectory.reserve(r.trajectory().size());
        // V_follower = V_leader + V_rel integrates to this identity exactly,
        // so absolute positions are reconstructed rather than re-integrated.
        for (const TrajectorySample& s : r.trajectory()) {
            WorldSample w{s, Vec3::Zero(), cfg.leader.position_at(s.t)};
            w.absolute = s.x + w.leader + f.desired_offset;
            fr.min_inter_agent_distance_m = std::min(fr.min_inter_agent_distance_m, (w.absolute - w.leader).norm());
            fr.trajectory.push_back(std::move(w));
        }
        res.followers.push_back(std::move(fr));
    }
    return res;
}

}  // namespace sphform
