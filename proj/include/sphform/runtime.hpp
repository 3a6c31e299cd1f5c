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

#include "sphform/supervisor.hpp"
#include "sphform/synthesis.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>

namespace sphform {

SPHFORM_DEFINE_ERROR(EdgeGraze);
SPHFORM_DEFINE_ERROR(SkippedRegion);
SPHFORM_DEFINE_ERROR(RegionMismatch);
SPHFORM_DEFINE_ERROR(NoEnabledAction);
SPHFORM_DEFINE_ERROR(MultipleEnabledActions);
SPHFORM_DEFINE_ERROR(HorizonExit);

using VectorField = std::function<Vec3(const Vec3&)>;

Vec3 rk4_step(const VectorField& f, const Vec3& x, double h);

// State along the current step as a function of absolute time.
using Propagator = std::function<Vec3(double t)>;

struct DetectorState {
    RegionIndex confirmed{};
    std::optional<PartitionCell> last_classified;
    double t_lo = 0, t_hi = 0;  // bracket of the last crossing
};

struct Crossing {
    Event event;      // Detection(confirmed, new)
    double t = 0;     // first bracketed time known to be in the new region
    Vec3 point;       // crossing estimate at the bracket midpoint
    Vec3 x_after;     // state at t
};

// Linear interpolation between x_prev and x_next when flow is empty.
std::optional<Crossing> detector_step(DetectorState& st, const Partition& p, const Vec3& x_prev, const Vec3& x_next,
                                      double t_prev, double t_next, const Propagator& flow = {},
                                      double bracket_s = 1e-6);

struct ActuatorState {
    ControlLabel active_label = ControlLabel::Hold;
    RegionIndex active_region{};
    RegionBox box{};
    VertexControls active_controls{};
    double clamp_tol = 0.0;  // metric
};

Vec3 actuate(const ActuatorState& st, const Vec3& x);  // throws RegionMismatch

// Lazily synthesized controllers keyed by (region, label); safe for
// concurrent insert-or-get.
class ControllerCache {
  public:
    ControllerCache(const Partition& p, SpeedBound bound, SynthesisOptions opt = {});

    const VertexControls& get(const RegionIndex& r, ControlLabel l);
    std::size_t size() const;
    const Partition& partition() const { return partition_; }
    SpeedBound bound() const { return bound_; }
    const SynthesisOptions& options() const { return opt_; }

  private:
    Partition partition_;
    SpeedBound bound_;
    SynthesisOptions opt_;
    mutable std::mutex mu_;
    std::map<std::pair<RegionIndex, ControlLabel>, std::unique_ptr<VertexControls>> cache_;
};

struct Perturbation {
    double time_s = 0.0;
    Vec3 offset = Vec3::Zero();
};

struct RunConfig {
    double step_s = 0.01;
    double duration_s = 60.0;
    double bracket_s = 1e-6;
    std::optional<Perturbation> perturbation;
};

// Throws InvalidSpec unless v_max * h < min cell thickness / 4.
void validate_step(const Partition& p, double v_max, double step_s);

struct TrajectorySample {
    double t = 0;
    Vec3 x = Vec3::Zero();  // relative state
    Vec3 u = Vec3::Zero();
    RegionIndex region{};
    ControlLabel label = ControlLabel::Hold;
};

struct LogEntry {
    double t = 0;
    Event event;
    std::string from, to;  // plant (G) state names
    bool resync = false;   // supervisor re-initialized after a disturbance
};

struct RunOutcome {
    bool reached = false;
    bool held = false;
    double time_to_formation_s = -1.0;  // < 0 when never reached
    RegionIndex final_region{};
    ControlLabel final_label = ControlLabel::Hold;
    std::size_t collision_alarms = 0;
};

// Fires ca when it returns true; polled at decision points and after every
// step while the plant automaton sits in a region state.
using ExternalSource = std::function<bool(double t, const RegionIndex& region)>;

class HybridRunner {
  public:
    HybridRunner(const Partition& p, const des::PlantModel& g, const des::ClosedLoop& cl, ControllerCache& cache,
                 RunConfig cfg, const Vec3& x0, ExternalSource ext = {});

    bool done() const { return step_index_ >= total_steps_; }
    void step();  // one grid step (possibly split at crossings)
    void run() {
        while (!done()) step();
    }

    double time() const { return t_; }
    const Vec3& state() const { return x_; }
    const RegionIndex& region() const { return region_; }
    ControlLabel label() const { return act_.active_label; }
    Vec3 velocity() const { return actuate(act_, x_); }
    const std::vector<TrajectorySample>& trajectory() const { return traj_; }
    const std::vector<LogEntry>& events() const { return log_; }
    std::vector<Event> event_string(bool include_resync = true) const;
    RunOutcome outcome() const;

  private:
    void decide();
    void feed(const Event& e);
    void on_detection(const Event& e);
    void poll_external();
    void apply_perturbation();
    void record();
    bool plant_in_region_state() const;

    const Partition& part_;
    const des::PlantModel& plant_;
    const des::ClosedLoop& cl_;
    ControllerCache& cache_;
    RunConfig cfg_;
    ExternalSource ext_;
    double clamp_tol_;

    des::StateId cl_state_ = 0;
    DetectorState det_;
    ActuatorState act_;
    Vec3 x_;
    double t_ = 0;
    RegionIndex region_{};
    long step_index_ = 0, total_steps_ = 0;
    bool perturbed_ = false;

    std::vector<TrajectorySample> traj_;
    std::vector<LogEntry> log_;
    std::size_t alarms_ = 0;
    double reached_at_ = -1.0;
    bool left_after_reach_ = false;
};

struct RunResult {
    std::vector<TrajectorySample> trajectory;
    std::vector<LogEntry> events;
    RunOutcome outcome;
};

RunResult run_closed_loop(const Partition& p, const des::PlantModel& g, const des::ClosedLoop& cl,
                          ControllerCache& cache, const RunConfig& cfg, const Vec3& x0, ExternalSource ext = {});

}  // namespace sphform
