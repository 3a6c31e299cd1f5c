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

#include "sphform/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sphform {

namespace {

// Metric distance from a point to the surface carrying a facet.
double facet_surface_distance(const RegionBox& box, FacetId f, const Vec3& x) {
    const SphericalPoint s = to_spherical(x);
    const double v = box.facet_value(f);
    switch (f.axis) {
        case Axis::R: return std::abs(s.r - v);
        case Axis::Theta: {
            const double d = std::abs(std::remainder(s.theta - v, kTwoPi));
            const double rho = s.r * std::sin(s.phi);
            return d >= kPi / 2 ? rho : rho * std::sin(d);
        }
        case Axis::Phi: {
            const double d = std::abs(s.phi - v);
            return d >= kPi / 2 ? s.r : s.r * std::sin(d);
        }
    }
    return 0;
}

}  // namespace

SynthesisSweep synthesize_all(const Partition& p, SpeedBound bound, const SynthesisOptions& opt,
                              const std::vector<RegionIndex>& regions) {
    SynthesisSweep sw;
    const std::vector<RegionIndex> todo = regions.empty() ? p.regions() : regions;
    for (const RegionIndex& r : todo) {
        auto& feasible = sw.feasible[r];
        const RegionBox box = p.box(r);
        for (ControlLabel l : des::available_labels(p.spec(), r)) {
            try {
                const SynthesisResult res = synthesize_detailed(box, l, bound, opt, r);
                sw.reports[{r, l}] = verify_label(box, res.controls, opt.verify_samples);
                sw.controls[{r, l}] = res.controls;
                feasible.push_back(l);
            } catch (const Error& e) {
                sw.failures.push_back({r, l, e.what()});
            }
        }
    }
    return sw;
}

des::Automaton build_abstract_ts(const Partition& p, const FeasibilityMap& feasible) {
    des::Automaton ts;
    std::map<RegionIndex, des::StateId> id;
    for (const RegionIndex& r : p.regions()) id[r] = ts.add_state(des::region_state_name(r), true, r.i == 1);
    for (const auto& [r, s] : id) {
        auto it = feasible.find(r);
        const std::vector<ControlLabel> none;
        const auto& labels = it == feasible.end() ? none : it->second;
        auto has = [&](ControlLabel l) { return std::find(labels.begin(), labels.end(), l) != labels.end(); };
        if (!has(ControlLabel::Hold)) throw InfeasibleController(r, ControlLabel::Hold, "");
        ts.add_transition(s, Event::actuation(ControlLabel::Hold), s);
        if (r.i != 1) ts.add_transition(s, Event::collision_alarm(), s);
        for (FacetId f : kAllFacets) {
            const auto target = p.adjacent(r, f);
            if (!target) continue;
            const ControlLabel l = exit_label(f);
            if (!has(l)) throw InfeasibleController(r, l, "");
            const std::string name = des::detection_state_name(r, *target);
            des::StateId d;
            if (auto found = ts.find(name)) {
                d = *found;
            } else {
                d = ts.add_state(name);
                ts.add_transition(d, Event::detection(r, *target), id.at(*target));
            }
            ts.add_transition(s, Event::actuation(l), d);
        }
    }
    return ts;
}

std::string to_string(TransitionOutcome::Kind k) {
    switch (k) {
        case TransitionOutcome::Kind::Crossed: return "Crossed";
        case TransitionOutcome::Kind::Invariant: return "Invariant";
        case TransitionOutcome::Kind::CrossedWrongFacet: return "CrossedWrongFacet";
        case TransitionOutcome::Kind::EdgeGraze: return "EdgeGraze";
        case TransitionOutcome::Kind::SkippedRegion: return "SkippedRegion";
        case TransitionOutcome::Kind::Timeout: return "Timeout";
        case TransitionOutcome::Kind::LeftHorizon: return "LeftHorizon";
    }
    return "?";
}

double region_diameter(const RegionBox& box) {
    double d = 0;
    for (int a = 0; a < 8; ++a)
        for (int b = a + 1; b < 8; ++b)
            d = std::max(d, (to_cartesian(box.vertex(a)) - to_cartesian(box.vertex(b))).norm());
    // Arcs bulge beyond the vertex hull for wide sectors; bound by the
    // outer radius span as a floor.
    return std::max(d, box.r_hi - box.r_lo);
}

TransitionOutcome continuous_transition(const Partition& p, const RegionIndex& region, ControlLabel label,
                                        const Vec3& x0, const VertexControls& controls, const TransitionConfig& cfg) {
    const PartitionCell c0 = p.classify(x0);
    if (c0.kind != PartitionCell::Kind::Region || c0.a != region)
        throw PointNotInRegion("start must lie strictly inside " + to_string(region) + ", got " + to_string(c0));

    double u_max = 0;
    for (const Vec3& u : controls.u) u_max = std::max(u_max, u.norm());
    const RegionBox box = p.box(region);
    ActuatorState act{label, region, box, controls, 2.0 * u_max * cfg.step_s + 1e-6};
    const VectorField field = [&](const Vec3& x) { return actuate(act, x); };

    double horizon = cfg.hold_timeout_s;
    if (label != ControlLabel::Hold) {
        const double v = cfg.v_max > 0 ? cfg.v_max : u_max / cfg.kappa;
        horizon = cfg.exit_timeout_s > 0 ? cfg.exit_timeout_s : 4.0 * region_diameter(box) / (cfg.kappa * v);
    }
    const double r_max = p.spec().radius_m * (1.0 + kDefaultTolerance);

    TransitionOutcome out;
    DetectorState det;
    det.confirmed = region;
    Vec3 x = x0;
    const long steps = static_cast<long>(std::ceil(horizon / cfg.step_s));
    for (long n = 0; n < steps; ++n) {
        const double t0 = n * cfg.step_s, t1 = std::min(horizon, (n + 1) * cfg.step_s);
        Vec3 xn;
        std::optional<Crossing> cross;
        try {
            const Vec3 xs = x;
            xn = rk4_step(field, xs, t1 - t0);
            if (xn.norm() > r_max) {
                out.kind = TransitionOutcome::Kind::LeftHorizon;
                out.time = t1;
                out.point = xn;
                return out;
            }
            const Propagator flow = [&](double t) { return rk4_step(field, xs, t - t0); };
            cross = detector_step(det, p, xs, xn, t0, t1, flow, cfg.bracket_s);
        } catch (const EdgeGraze&) {
            out.kind = TransitionOutcome::Kind::EdgeGraze;
            out.time = t1;
            return out;
        } catch (const SkippedRegion&) {
            out.kind = TransitionOutcome::Kind::SkippedRegion;
            out.time = t1;
            return out;
        } catch (const RegionMismatch&) {
            out.kind = TransitionOutcome::Kind::CrossedWrongFacet;
            out.time = t1;
            return out;
        }
        if (cross) {
            out.time = cross->t;
            out.point = cross->point;
            out.event = cross->event;
            if (label == ControlLabel::Hold) {
                out.kind = TransitionOutcome::Kind::CrossedWrongFacet;
                return out;
            }
            const FacetId f = exit_facet(label);
            const auto target = p.adjacent(region, f);
            const double on_tol = 1e-9 * p.spec().radius_m + 10.0 * u_max * cfg.bracket_s;
            const bool right = target && cross->event.to == *target && facet_surface_distance(box, f, cross->point) <= on_tol;
            out.kind = right ? TransitionOutcome::Kind::Crossed : TransitionOutcome::Kind::CrossedWrongFacet;
            return out;
        }
        x = xn;
    }
    out.time = horizon;
    out.point = x;
    out.kind = label == ControlLabel::Hold ? TransitionOutcome::Kind::Invariant : TransitionOutcome::Kind::Timeout;
    return out;
}

Relation label_identity(const des::Automaton& a, const des::Automaton& b) {
    Relation r;
    for (des::StateId s = 0; s < a.size(); ++s)
        if (auto t = b.find(a.name(s))) r.emplace_back(s, *t);
    return r;
}

BisimulationVerdict check_bisimulation_finite(const des::Automaton& a, const des::Automaton& b, const Relation& seed) {
    BisimulationVerdict v;
    std::set<std::pair<des::StateId, des::StateId>> rel(seed.begin(), seed.end());

    // Jacobi passes: each pass refutes pairs against the previous relation,
    // so the first reported removal is a direct mismatch.
    while (true) {
        std::vector<std::pair<std::pair<des::StateId, des::StateId>, Event>> removed;
        for (const auto& pq : rel) {
            const auto [s, t] = pq;
            std::optional<Event> bad;
            for (const auto& [e, s2] : a.transitions(s)) {
                auto t2 = b.next(t, e);
                if (!t2 || !rel.count({s2, *t2})) {
                    bad = e;
                    break;
                }
            }
            if (!bad) {
                for (const auto& [e, t2] : b.transitions(t)) {
                    auto s2 = a.next(s, e);
                    if (!s2 || !rel.count({*s2, t2})) {
                        bad = e;
                        break;
                    }
                }
            }
            if (bad) removed.push_back({pq, *bad});
        }
        if (removed.empty()) break;
        if (!v.pair) {
            v.pair = {a.name(removed.front().first.first), b.name(removed.front().first.second)};
            v.event = removed.front().second;
        }
        for (const auto& r : removed) rel.erase(r.first);
    }

    for (des::StateId s : a.initial_states()) {
        const bool ok = std::any_of(rel.begin(), rel.end(),
                                    [&](const auto& pq) { return pq.first == s && b.initial(pq.second); });
        if (!ok) {
            v.reason = "initial state " + a.name(s) + " of the first system has no related initial state";
            return v;
        }
    }
    for (des::StateId t : b.initial_states()) {
        const bool ok = std::any_of(rel.begin(), rel.end(),
                                    [&](const auto& pq) { return pq.second == t && a.initial(pq.first); });
        if (!ok) {
            v.reason = "initial state " + b.name(t) + " of the second system has no related initial state";
            return v;
        }
    }
    v.bisimilar = true;
    v.reason = v.pair ? "bisimilar after refining the seed" : "seed is a bisimulation";
    return v;
}

Vec3 sample_interior(const RegionBox& box, std::mt19937_64& rng, double margin) {
    auto shrink = [&](double lo, double hi) {
        const double w = hi - lo;
        return std::pair{lo + margin * w, hi - margin * w};
    };
    const auto [r0, r1] = shrink(box.r_lo, box.r_hi);
    const auto [t0, t1] = shrink(box.th_lo, box.th_hi);
    const auto [p0, p1] = shrink(box.ph_lo, box.ph_hi);
    const double r = std::cbrt(r0 * r0 * r0 + uniform01(rng) * (r1 * r1 * r1 - r0 * r0 * r0));
    const double th = t0 + uniform01(rng) * (t1 - t0);
    const double c0 = std::cos(p0), c1 = std::cos(p1);
    const double ph = std::acos(std::clamp(c0 + uniform01(rng) * (c1 - c0), -1.0, 1.0));
    return to_cartesian({r, th, ph});
}

SoundnessReport monte_carlo_soundness(const Partition& p, const SynthesisSweep& sweep, const SoundnessOptions& opt) {
    SoundnessReport rep;
    if (opt.trials <= 0) {
        rep.vacuous = true;
        return rep;
    }
    std::mt19937_64 rng(opt.seed);
    const std::vector<RegionIndex> regions = opt.regions.empty() ? p.regions() : opt.regions;
    for (const RegionIndex& r : regions) {
        const RegionBox box = p.box(r);
        for (ControlLabel l : des::available_labels(p.spec(), r)) {
            PairReport pr{r, l, 0, 0, {}, 0.0, {}};
            auto it = sweep.controls.find({r, l});
            if (it == sweep.controls.end()) {
                std::string why = "not synthesized";
                for (const SweepFailure& f : sweep.failures)
                    if (f.region == r && f.label == l) why = f.reason;
                rep.infeasible.push_back({r, l, why});
                pr.failures = opt.trials;
                pr.trials = opt.trials;
                pr.note = "InfeasibleController: " + why;
                rep.total_failures += opt.trials;
                rep.total_runs += opt.trials;
                rep.pairs.push_back(std::move(pr));
                continue;
            }
            if (auto rp = sweep.reports.find({r, l}); rp != sweep.reports.end())
                pr.certificate_margin = l == ControlLabel::Hold ? rp->second.worst_margin
                                                                : std::max(rp->second.worst_margin, -rp->second.exit_margin);
            for (int n = 0; n < opt.trials; ++n) {
                const Vec3 x0 = sample_interior(box, rng);
                const TransitionOutcome o = continuous_transition(p, r, l, x0, it->second, opt.transition);
                ++pr.trials;
                ++pr.by_kind[o.kind];
                if (!o.ok()) ++pr.failures;
            }
            rep.total_runs += pr.trials;
            rep.total_failures += pr.failures;
            rep.pairs.push_back(std::move(pr));
        }
    }
    rep.pass = rep.total_failures == 0 && rep.infeasible.empty();
    return rep;
}

}  // namespace sphform
