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

#include "sphform/supervisor.hpp"

namespace sphform::des {

namespace {

// Target of an actuation by index arithmetic, mirroring the alpha table.
RegionIndex alpha_target(const PartitionSpec& s, RegionIndex r, ControlLabel l) {
    const int sectors = s.n_theta - 1;
    switch (l) {
        case ControlLabel::RPlus: ++r.i; break;
        case ControlLabel::RMinus: --r.i; break;
        case ControlLabel::ThetaPlus: r.j = r.j == sectors ? 1 : r.j + 1; break;
        case ControlLabel::ThetaMinus: r.j = r.j == 1 ? sectors : r.j - 1; break;
        case ControlLabel::PhiPlus: ++r.k; break;
        case ControlLabel::PhiMinus: --r.k; break;
        case ControlLabel::Hold: break;
    }
    return r;
}

bool theta_successor(const PartitionSpec& s, const Event& e) {
    return e.is_detection() && e.to == alpha_target(s, e.from, ControlLabel::ThetaPlus);
}

std::vector<StateId> plant_components(const Supervisor& s) {
    std::vector<StateId> out;
    out.reserve(s.realized.components.size());
    for (const auto& c : s.realized.components) out.push_back(c.second);
    return out;
}

// Initial pairs (x, y) whose plant components agree.
Coupling match_on_plant(const Automaton& a, const std::vector<StateId>& pa, const Automaton& b,
                        const std::vector<StateId>& pb) {
    std::map<StateId, std::vector<StateId>> by_plant;
    for (StateId y : b.initial_states()) by_plant[pb[y]].push_back(y);
    Coupling c;
    for (StateId x : a.initial_states()) {
        auto it = by_plant.find(pa[x]);
        if (it == by_plant.end()) continue;
        for (StateId y : it->second) c.emplace_back(x, y);
    }
    return c;
}

}  // namespace

bool available(const PartitionSpec& s, const RegionIndex& r, ControlLabel l) {
    switch (l) {
        case ControlLabel::Hold:
        case ControlLabel::ThetaPlus:
        case ControlLabel::ThetaMinus: return true;
        case ControlLabel::RPlus: return r.i < s.n_r - 1;
        case ControlLabel::RMinus: return r.i > 1;
        case ControlLabel::PhiPlus: return r.k < s.n_phi - 1;
        case ControlLabel::PhiMinus: return r.k > 1;
    }
    return false;
}

std::vector<ControlLabel> available_labels(const PartitionSpec& s, const RegionIndex& r) {
    std::vector<ControlLabel> out;
    for (ControlLabel l : kAllLabels)
        if (available(s, r, l)) out.push_back(l);
    return out;
}

std::string region_state_name(const RegionIndex& r) { return "R" + to_string(r); }

std::string detection_state_name(const RegionIndex& a, const RegionIndex& b) {
    return "d(" + to_string(a) + "," + to_string(b) + ")";
}

PlantModel build_plant(const PartitionSpec& spec) {
    spec.validate();
    PlantModel g;
    g.spec = spec;
    Automaton& a = g.automaton;
    const Partition part(spec);
    for (const RegionIndex& r : part.regions()) {
        g.region_state[r] = a.add_state(region_state_name(r), true, r.i == 1);
        g.state_region.push_back(r);
    }
    for (const auto& [r, s] : g.region_state) {
        a.add_transition(s, Event::actuation(ControlLabel::Hold), s);
        if (r.i != 1) a.add_transition(s, Event::collision_alarm(), s);
        for (ControlLabel l : kAllLabels) {
            if (l == ControlLabel::Hold || !available(spec, r, l)) continue;
            const RegionIndex t = alpha_target(spec, r, l);
            const std::string dn = detection_state_name(r, t);
            StateId d;
            if (auto found = a.find(dn)) {
                d = *found;
            } else {
                d = a.add_state(dn);
                g.state_region.push_back(std::nullopt);
                a.add_transition(d, Event::detection(r, t), g.region_state.at(t));
            }
            a.add_transition(s, Event::actuation(l), d);
        }
    }
    return g;
}

std::string to_string(MergedState m) {
    static const char* names[] = {"P", "P_1", "P_n", "N", "N_1", "N_n", "R", "R_1", "R_n", "D"};
    return names[static_cast<int>(m)];
}

MergedState merged_class(const PartitionSpec& s, const RegionIndex& r) {
    const int band = r.k == 1 ? 1 : (r.k == s.n_phi - 1 ? 2 : 0);
    int base = 0;  // P
    if (r.i == 1)
        base = 6;  // R
    else if (r.i == s.n_r - 1)
        base = 3;  // N
    return static_cast<MergedState>(base + band);
}

std::set<ControlLabel> gamma_c(MergedState m) {
    using L = ControlLabel;
    std::set<L> out{L::ThetaPlus, L::ThetaMinus};
    const int idx = static_cast<int>(m);
    if (m == MergedState::D) return {};
    const int base = idx / 3 * 3, band = idx % 3;
    if (base != 6) out.insert(L::RMinus);
    if (base != 3) out.insert(L::RPlus);
    if (band != 2) out.insert(L::PhiPlus);
    if (band != 1) out.insert(L::PhiMinus);
    return out;
}

Automaton refine_plant(const PlantModel& g) {
    Automaton a;
    std::map<MergedState, StateId> id;
    std::set<MergedState> present;
    for (const auto& [r, s] : g.region_state) present.insert(merged_class(g.spec, r));
    for (MergedState m : present) {
        const bool shell1 = static_cast<int>(m) >= 6;
        id[m] = a.add_state(to_string(m), true, shell1);
    }
    const StateId d = a.add_state("D");
    for (MergedState m : present) {
        a.add_transition(id[m], Event::actuation(ControlLabel::Hold), id[m]);
        if (static_cast<int>(m) < 6) a.add_transition(id[m], Event::collision_alarm(), id[m]);
        for (ControlLabel l : gamma_c(m)) a.add_transition(id[m], Event::actuation(l), d);
    }
    for (const Event& e : g.automaton.alphabet())
        if (e.is_detection()) a.add_transition(d, e, id.at(merged_class(g.spec, e.to)));
    return a;
}

Automaton formation_pattern(const PlantModel& g) {
    Automaton a;
    const StateId pf = a.add_state("P_f", true, true);
    const StateId rf = a.add_state("R_f", true, true);
    const StateId af = a.add_state("A_f", false, true);
    const Event ca = Event::collision_alarm();
    a.add_transition(pf, Event::actuation(ControlLabel::RMinus), pf);
    a.add_transition(pf, ca, af);
    a.add_transition(rf, Event::actuation(ControlLabel::Hold), rf);
    a.add_transition(rf, ca, rf);
    for (ControlLabel l : kAllLabels) a.add_transition(af, Event::actuation(l), af);
    a.add_transition(af, ca, af);
    for (const Event& e : g.automaton.alphabet()) {
        if (!e.is_detection()) continue;
        const StateId to = e.to.i == 1 ? rf : pf;
        for (StateId s : {pf, rf, af}) a.add_transition(s, e, to);
    }
    return a;
}

Automaton collision_pattern(const PlantModel& g) {
    Automaton a;
    const StateId nc = a.add_state("N_c", true, true);
    const StateId ac = a.add_state("A_c", false, true);
    const Event ca = Event::collision_alarm();
    for (ControlLabel l : kAllLabels) a.add_transition(nc, Event::actuation(l), nc);
    a.add_transition(nc, ca, ac);
    a.add_transition(ac, Event::actuation(ControlLabel::ThetaPlus), ac);
    a.add_transition(ac, ca, ac);
    for (const Event& e : g.automaton.alphabet()) {
        if (!e.is_detection()) continue;
        a.add_transition(nc, e, nc);
        if (theta_successor(g.spec, e)) a.add_transition(ac, e, nc);
    }
    return a;
}

Coupling formation_coupling(const Automaton& pattern, const PlantModel& g) {
    const StateId pf = *pattern.find("P_f"), rf = *pattern.find("R_f");
    Coupling c;
    for (const auto& [r, s] : g.region_state) c.emplace_back(r.i == 1 ? rf : pf, s);
    return c;
}

Coupling collision_coupling(const Automaton& pattern, const PlantModel& g) {
    const StateId nc = *pattern.find("N_c");
    Coupling c;
    for (const auto& [r, s] : g.region_state) c.emplace_back(nc, s);
    return c;
}

Supervisor realize_supervisor(Automaton pattern, const PlantModel& g, const Coupling& coupling) {
    Supervisor s;
    s.realized = parallel_compose(pattern, g.automaton, coupling);
    s.pattern = std::move(pattern);
    return s;
}

Supervisor build_formation_supervisor(const PlantModel& g) {
    Automaton p = formation_pattern(g);
    const Coupling c = formation_coupling(p, g);
    return realize_supervisor(std::move(p), g, c);
}

Supervisor build_collision_supervisor(const PlantModel& g) {
    Automaton p = collision_pattern(g);
    const Coupling c = collision_coupling(p, g);
    return realize_supervisor(std::move(p), g, c);
}

Product compose_supervisors(const Supervisor& s1, const Supervisor& s2) {
    const Automaton& a = s1.realized.automaton;
    const Automaton& b = s2.realized.automaton;
    return parallel_compose(a, b, match_on_plant(a, plant_components(s1), b, plant_components(s2)));
}

Product compose_with_plant(const PlantModel& g, const Supervisor& s) {
    std::vector<StateId> identity(g.automaton.size());
    for (StateId i = 0; i < identity.size(); ++i) identity[i] = i;
    const Automaton& b = s.realized.automaton;
    return parallel_compose(g.automaton, b, match_on_plant(g.automaton, identity, b, plant_components(s)));
}

ClosedLoop closed_loop(const PlantModel& g, const Supervisor& sf, const Supervisor& sc) {
    const Product gf = compose_with_plant(g, sf);
    std::vector<StateId> gf_plant;
    for (const auto& c : gf.components) gf_plant.push_back(c.first);
    const Automaton& b = sc.realized.automaton;
    Product full = parallel_compose(gf.automaton, b, match_on_plant(gf.automaton, gf_plant, b, plant_components(sc)));

    ClosedLoop cl;
    for (const auto& c : full.components) cl.plant_state.push_back(gf_plant[c.first]);
    cl.automaton = std::move(full.automaton);
    for (StateId s : cl.automaton.initial_states()) {
        if (const auto& r = g.state_region[cl.plant_state[s]]) cl.initial_for_region[*r] = s;
    }
    return cl;
}

std::vector<ControlLabel> ClosedLoop::enabled_actuations(StateId s) const {
    std::vector<ControlLabel> out;
    for (const auto& [e, t] : automaton.transitions(s))
        if (e.controllable()) out.push_back(e.label);
    return out;
}

}  // namespace sphform::des
