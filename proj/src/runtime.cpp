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

#include "sphform/runtime.hpp"

#include <cmath>

namespace sphform {

Vec3 rk4_step(const VectorField& f, const Vec3& x, double h) {
    const Vec3 k1 = f(x);
    const Vec3 k2 = f(x + 0.5 * h * k1);
    const Vec3 k3 = f(x + 0.5 * h * k2);
    const Vec3 k4 = f(x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::optional<Crossing> detector_step(DetectorState& st, const Partition& p, const Vec3& x_prev, const Vec3& x_next,
                                      double t_prev, double t_next, const Propagator& flow, double bracket_s) {
    const RegionIndex end = p.region_of(x_next);
    if (end == st.confirmed) {
        st.last_classified = PartitionCell{PartitionCell::Kind::Region, end, {}};
        return std::nullopt;
    }
    if (!p.is_adjacent(st.confirmed, end))
        throw SkippedRegion("step from " + to_string(st.confirmed) + " lands in non-adjacent " + to_string(end));

    const Propagator lin = [&](double t) {
        const double s = (t - t_prev) / (t_next - t_prev);
        return Vec3(x_prev + s * (x_next - x_prev));
    };
    const Propagator& at = flow ? flow : lin;

    double lo = t_prev, hi = t_next;
    while (hi - lo > bracket_s) {
        const double mid = 0.5 * (lo + hi);
        if (p.region_of(at(mid)) == st.confirmed)
            lo = mid;
        else
            hi = mid;
    }
    const Vec3 x_lo = at(lo), x_hi = at(hi);
    const RegionIndex fresh = p.region_of(x_hi);
    const Vec3 point = at(0.5 * (lo + hi));
    const double tol = 2.0 * (x_hi - x_lo).norm() / p.spec().radius_m + kDefaultTolerance;

    PartitionCell cell;
    try {
        cell = p.classify(point, tol);
    } catch (const PointOutsideHorizon&) {
        cell.kind = PartitionCell::Kind::Surface;
    }
    const bool matches = cell.kind == PartitionCell::Kind::Detection &&
                         ((cell.a == st.confirmed && cell.b == fresh) || (cell.a == fresh && cell.b == st.confirmed));
    if (!matches)
        throw EdgeGraze("crossing " + to_string(st.confirmed) + " -> " + to_string(fresh) + " classified as " +
                        to_string(cell));

    st.last_classified = cell;
    st.t_lo = lo;
    st.t_hi = hi;
    Crossing c{Event::detection(st.confirmed, fresh), hi, point, x_hi};
    st.confirmed = fresh;
    return c;
}

Vec3 actuate(const ActuatorState& st, const Vec3& x) {
    try {
        return interpolate(st.box, st.active_controls.u, to_spherical(x), st.clamp_tol);
    } catch (const PointNotInRegion& e) {
        throw RegionMismatch("actuator for " + to_string(st.active_region) + ": " + e.what());
    }
}

ControllerCache::ControllerCache(const Partition& p, SpeedBound bound, SynthesisOptions opt)
    : partition_(p), bound_(bound), opt_(opt) {}

const VertexControls& ControllerCache::get(const RegionIndex& r, ControlLabel l) {
    std::lock_guard lock(mu_);
    auto& slot = cache_[{r, l}];
    if (!slot) {
        try {
            slot = std::make_unique<VertexControls>(synthesize(partition_, r, l, bound_, opt_));
        } catch (...) {
            cache_.erase({r, l});
            throw;
        }
    }
    return *slot;
}

std::size_t ControllerCache::size() const {
    std::lock_guard lock(mu_);
    return cache_.size();
}

void validate_step(const Partition& p, double v_max, double step_s) {
    if (!(step_s > 0.0)) throw InvalidSpec("sim.step_s must be positive");
    const double limit = p.min_cell_thickness() / 4.0;
    if (!(v_max * step_s < limit))
        throw InvalidSpec("sim.step_s too large: v_max*h = " + std::to_string(v_max * step_s) +
                          " m must stay below min cell thickness/4 = " + std::to_string(limit) + " m");
}

HybridRunner::HybridRunner(const Partition& p, const des::PlantModel& g, const des::ClosedLoop& cl,
                           ControllerCache& cache, RunConfig cfg, const Vec3& x0, ExternalSource ext)
    : part_(p), plant_(g), cl_(cl), cache_(cache), cfg_(std::move(cfg)), ext_(std::move(ext)), x_(x0) {
    const double v_max = cache_.bound().v_max;
    validate_step(part_, v_max, cfg_.step_s);
    // RK4 stages of a crossing step probe up to about one step beyond the
    // exit facet before the detector splits the step.
    clamp_tol_ = 2.0 * v_max * cfg_.step_s + 1e-6;
    total_steps_ = std::lround(cfg_.duration_s / cfg_.step_s);

    const PartitionCell c = part_.classify(x0);
    if (c.kind != PartitionCell::Kind::Region)
        throw PointNotInRegion("initial state must lie strictly inside a region, got " + to_string(c));
    region_ = c.a;
    det_.confirmed = region_;
    cl_state_ = cl_.initial_for_region.at(region_);
    if (region_.i == 1) reached_at_ = 0.0;
    decide();
    record();
}

bool HybridRunner::plant_in_region_state() const { return plant_.is_region_state(cl_.plant_state[cl_state_]); }

void HybridRunner::feed(const Event& e) {
    const auto next = cl_.automaton.next(cl_state_, e);
    if (!next)
        throw RegionMismatch("closed loop rejects " + to_string(e) + " in " +
                             plant_.automaton.name(cl_.plant_state[cl_state_]));
    LogEntry entry{t_, e, plant_.automaton.name(cl_.plant_state[cl_state_]), {}, false};
    cl_state_ = *next;
    entry.to = plant_.automaton.name(cl_.plant_state[cl_state_]);
    log_.push_back(std::move(entry));
}

void HybridRunner::decide() {
    if (plant_in_region_state() && ext_ && ext_(t_, region_)) {
        feed(Event::collision_alarm());
        ++alarms_;
    }
    const auto enabled = cl_.enabled_actuations(cl_state_);
    if (enabled.empty())
        throw NoEnabledAction("no actuation enabled in " + cl_.automaton.name(cl_state_));
    if (enabled.size() > 1)
        throw MultipleEnabledActions(std::to_string(enabled.size()) + " actuations enabled in " +
                                     cl_.automaton.name(cl_state_));
    const ControlLabel l = enabled.front();
    act_ = {l, region_, part_.box(region_), cache_.get(region_, l), clamp_tol_};
    feed(Event::actuation(l));
}

void HybridRunner::on_detection(const Event& e) {
    if (cl_.automaton.next(cl_state_, e)) {
        feed(e);
    } else if (perturbed_) {
        // Resume from the coupled initial state of the entered region.
        LogEntry entry{t_, e, plant_.automaton.name(cl_.plant_state[cl_state_]), {}, true};
        cl_state_ = cl_.initial_for_region.at(e.to);
        entry.to = plant_.automaton.name(cl_.plant_state[cl_state_]);
        log_.push_back(std::move(entry));
    } else {
        feed(e);  // throws with context
    }
    region_ = e.to;
    if (region_.i == 1 && reached_at_ < 0) reached_at_ = t_;
    if (region_.i != 1 && reached_at_ >= 0) left_after_reach_ = true;
    decide();
}

void HybridRunner::poll_external() {
    if (!ext_ || !plant_in_region_state()) return;
    if (!ext_(t_, region_)) return;
    feed(Event::collision_alarm());
    ++alarms_;
    const auto saved = ext_;
    ext_ = nullptr;  // the alarm was just delivered; decide without re-polling
    decide();
    ext_ = saved;
}

void HybridRunner::apply_perturbation() {
    perturbed_ = true;
    x_ += cfg_.perturbation->offset;
    if (x_.norm() > part_.spec().radius_m) throw HorizonExit("perturbation leaves the control horizon");
    const RegionIndex fresh = part_.region_of(x_);
    det_.confirmed = fresh;
    if (fresh == region_) return;
    on_detection(Event::detection(region_, fresh));
}

void HybridRunner::record() { traj_.push_back({t_, x_, actuate(act_, x_), region_, act_.active_label}); }

void HybridRunner::step() {
    if (done()) return;
    const double h = cfg_.step_s;
    const double t1 = static_cast<double>(step_index_ + 1) * h;
    const VectorField field = [this](const Vec3& x) { return actuate(act_, x); };
    const double r_max = part_.spec().radius_m * (1.0 + kDefaultTolerance);
    while (true) {
        const Vec3 x0 = x_;
        const double t0 = t_;
        const Propagator flow = [&](double t) { return rk4_step(field, x0, t - t0); };
        const Vec3 x_next = rk4_step(field, x0, t1 - t0);
        if (x_next.norm() > r_max) throw HorizonExit("state left the control horizon at t = " + std::to_string(t1));
        const auto cross = detector_step(det_, part_, x0, x_next, t0, t1, flow, cfg_.bracket_s);
        if (!cross) {
            x_ = x_next;
            break;
        }
        x_ = cross->x_after;
        t_ = cross->t;
        on_detection(cross->event);
        if (t_ < t1) record();
    }
    ++step_index_;
    t_ = t1;
    if (cfg_.perturbation && !perturbed_ && t_ >= cfg_.perturbation->time_s) apply_perturbation();
    poll_external();
    record();
}

std::vector<Event> HybridRunner::event_string(bool include_resync) const {
    std::vector<Event> out;
    for (const LogEntry& e : log_)
        if (include_resync || !e.resync) out.push_back(e.event);
    return out;
}

RunOutcome HybridRunner::outcome() const {
    RunOutcome o;
    o.final_region = region_;
    o.final_label = act_.active_label;
    o.reached = region_.i == 1 && act_.active_label == ControlLabel::Hold;
    o.held = o.reached && !left_after_reach_;
    o.time_to_formation_s = o.reached ? reached_at_ : -1.0;
    o.collision_alarms = alarms_;
    return o;
}

RunResult run_closed_loop(const Partition& p, const des::PlantModel& g, const des::ClosedLoop& cl,
                          ControllerCache& cache, const RunConfig& cfg, const Vec3& x0, ExternalSource ext) {
    HybridRunner runner(p, g, cl, cache, cfg, x0, std::move(ext));
    runner.run();
    return {runner.trajectory(), runner.events(), runner.outcome()};
}

}  // namespace sphform
