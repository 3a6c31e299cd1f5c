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

#include "sphform/checks.hpp"

#include <cstdio>

namespace sphform {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

CheckLine language_line(std::string name, const des::LanguageVerdict& v, bool gating = true) {
    return {std::move(name), v.equal(), gating, v.describe() + ", " + std::to_string(v.explored) + " subset pairs"};
}

// Realized supervisor states paired with the plant state they start in.
des::Coupling plant_starts(const des::Supervisor& s) {
    des::Coupling c;
    for (des::StateId x : s.realized.automaton.initial_states()) c.emplace_back(x, s.realized.components[x].second);
    return c;
}

}  // namespace

bool CheckReport::pass() const {
    for (const CheckLine& l : lines)
        if (l.gating && !l.pass) return false;
    return true;
}

std::string CheckReport::render() const {
    std::string out;
    for (const CheckLine& l : lines) {
        out += l.gating ? (l.pass ? "PASS " : "FAIL ") : "INFO ";
        out += l.name;
        if (!l.detail.empty()) out += ": " + l.detail;
        out += '\n';
    }
    return out;
}

CheckReport des_checks(const PartitionSpec& spec) {
    using namespace des;
    CheckReport rep;
    const PlantModel g = build_plant(spec);
    const Automaton ref = refine_plant(g);
    const std::string dims = std::to_string(spec.n_r - 1) + "x" + std::to_string(spec.n_theta - 1) + "x" +
                             std::to_string(spec.n_phi - 1);
    rep.lines.push_back({"plant " + dims, true, false,
                         std::to_string(g.automaton.size()) + " states, " +
                             std::to_string(g.automaton.transition_count()) + " transitions; merged plant " +
                             std::to_string(ref.size()) + " states"});

    rep.lines.push_back(language_line("L(G) subset of L(G_ref), L_m likewise", language_included(g.automaton, ref)));
    rep.lines.push_back(language_line("L(G) = L(G_ref), L_m likewise", language_equal(g.automaton, ref), false));

    const Supervisor sf = build_formation_supervisor(g);
    const Supervisor sc = build_collision_supervisor(g);
    const auto kf = is_controllable(sf.realized.automaton, g.automaton, plant_starts(sf));
    rep.lines.push_back({"K_F controllable", kf.controllable, true, kf.describe()});
    const auto kc = is_controllable(sc.realized.automaton, g.automaton, plant_starts(sc));
    rep.lines.push_back({"K_C controllable", kc.controllable, true, kc.describe()});

    rep.lines.push_back(language_line("L(G||S_F) = L(S_F)",
                                      language_equal(compose_with_plant(g, sf).automaton, sf.realized.automaton)));
    rep.lines.push_back(language_line("L(G||S_C) = L(S_C)",
                                      language_equal(compose_with_plant(g, sc).automaton, sc.realized.automaton)));

    const ClosedLoop cl = closed_loop(g, sf, sc);
    rep.lines.push_back(language_line("L(G||S_F||S_C) = L(S_F) and L(S_C)",
                                      language_equal(cl.automaton, compose_supervisors(sf, sc).automaton)));
    const auto nb = check_nonblocking(cl.automaton);
    rep.lines.push_back({"closed loop nonblocking", nb.nonblocking, true,
                         nb.nonblocking ? std::to_string(nb.reachable) + " reachable states"
                                        : "blocking at " + cl.automaton.name(*nb.blocking_state)});
    return rep;
}

CheckReport synth_checks(const Partition& p, SpeedBound bound, const SynthesisOptions& opt) {
    CheckReport rep;
    const SynthesisSweep sw = synthesize_all(p, bound, opt);
    for (const RegionIndex& r : p.regions()) {
        for (ControlLabel l : des::available_labels(p.spec(), r)) {
            CheckLine line{to_string(r) + " " + to_string(l), false, true, {}};
            if (auto it = sw.reports.find({r, l}); it != sw.reports.end()) {
                const CertificateReport& c = it->second;
                line.pass = c.pass;
                line.detail = "worst " + num(c.worst_margin);
                if (l != ControlLabel::Hold) line.detail += ", exit " + num(c.exit_margin);
            } else {
                line.detail = "Infeasible";
                for (const SweepFailure& f : sw.failures)
                    if (f.region == r && f.label == l) line.detail = f.reason;
            }
            rep.lines.push_back(std::move(line));
        }
    }
    return rep;
}

CheckReport abstraction_checks(const Partition& p, SpeedBound bound, const SynthesisOptions& opt,
                               const SoundnessOptions& mc) {
    CheckReport rep;
    const SynthesisSweep sw = synthesize_all(p, bound, opt, mc.regions);
    rep.lines.push_back({"synthesis", sw.failures.empty(), true,
                         std::to_string(sw.controls.size()) + " controllers, " + std::to_string(sw.failures.size()) +
                             " infeasible" + (sw.failures.empty() ? "" : " (first: " + sw.failures.front().reason + ")")});

    if (mc.regions.empty()) {
        try {
            const des::Automaton ts = build_abstract_ts(p, sw.feasible);
            const des::PlantModel g = des::build_plant(p.spec());
            const BisimulationVerdict v = check_bisimulation_finite(ts, g.automaton, label_identity(ts, g.automaton));
            rep.lines.push_back({"T_xi bisimilar to G", v.bisimilar, true, v.reason});
        } catch (const InfeasibleController& e) {
            rep.lines.push_back({"T_xi bisimilar to G", false, true, e.what()});
        }
    }

    SoundnessOptions o = mc;
    if (o.transition.v_max <= 0) o.transition.v_max = bound.v_max;
    o.transition.kappa = opt.kappa;
    const SoundnessReport s = monte_carlo_soundness(p, sw, o);
    if (s.vacuous) {
        rep.lines.push_back({"monte carlo soundness", true, false, "vacuous pass, 0 samples per pair"});
        return rep;
    }
    for (const PairReport& pr : s.pairs) {
        if (pr.failures == 0) continue;
        std::string d = std::to_string(pr.failures) + "/" + std::to_string(pr.trials) + " failed";
        for (const auto& [k, n] : pr.by_kind)
            if (k != TransitionOutcome::Kind::Crossed && k != TransitionOutcome::Kind::Invariant)
                d += ", " + to_string(k) + " x" + std::to_string(n);
        if (!pr.note.empty()) d += ", " + pr.note;
        rep.lines.push_back({"  " + to_string(pr.region) + " " + to_string(pr.label), false, false, d});
    }
    rep.lines.push_back({"monte carlo soundness", s.pass, true,
                         std::to_string(s.total_failures) + " failures in " + std::to_string(s.total_runs) +
                             " runs over " + std::to_string(s.pairs.size()) + " pairs"});
    return rep;
}

}  // namespace sphform
