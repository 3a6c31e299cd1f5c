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

#include <set>

#include "doctest.h"
#include "sphform/checks.hpp"
#include "sphform/supervisor.hpp"

using namespace sphform;
using namespace sphform::des;

namespace {

const PartitionSpec k3{50, 4, 4, 4};
const PartitionSpec k4{50, 5, 5, 5};

using String = std::vector<Event>;

// Every string of length <= depth, with a marked flag, by explicit DFS.
struct Bounded {
    std::set<String> closed, marked;
};

void dfs(const Automaton& a, StateId s, String& cur, int depth, Bounded& out) {
    out.closed.insert(cur);
    if (a.marked(s)) out.marked.insert(cur);
    if (depth == 0) return;
    for (const auto& [e, t] : a.transitions(s)) {
        cur.push_back(e);
        dfs(a, t, cur, depth - 1, out);
        cur.pop_back();
    }
}

Bounded enumerate(const Automaton& a, int depth) {
    Bounded out;
    String cur;
    for (StateId s : a.initial_states()) dfs(a, s, cur, depth, out);
    return out;
}

Event act(ControlLabel l) { return Event::actuation(l); }
Event det(RegionIndex a, RegionIndex b) { return Event::detection(a, b); }

Automaton chain(const std::vector<Event>& word, bool mark_end) {
    Automaton a;
    StateId s = a.add_state("0", true, false);
    for (std::size_t n = 0; n < word.size(); ++n) {
        const StateId t = a.add_state(std::to_string(n + 1), false, mark_end && n + 1 == word.size());
        a.add_transition(s, word[n], t);
        s = t;
    }
    return a;
}

}  // namespace

TEST_CASE("parallel composition synchronizes shared and interleaves private events") {
    const Event x = act(ControlLabel::RPlus), y = act(ControlLabel::RMinus), z = act(ControlLabel::Hold);
    Automaton a = chain({x, z}, true);
    Automaton b = chain({y, z}, true);
    const Product p = parallel_compose(a, b, full_coupling(a, b));
    // x and y interleave, z synchronizes.
    CHECK(accepts_marked(p.automaton, std::vector<Event>{x, y, z}));
    CHECK(accepts_marked(p.automaton, std::vector<Event>{y, x, z}));
    CHECK_FALSE(accepts(p.automaton, std::vector<Event>{z}));
    CHECK_FALSE(accepts(p.automaton, std::vector<Event>{x, z}));
    CHECK(p.automaton.size() == 5u);
}

TEST_CASE("language equality reports shortest witnesses") {
    const Event x = act(ControlLabel::RPlus), y = act(ControlLabel::RMinus);
    const Automaton a = chain({x, y}, true);
    const Automaton b = chain({x, x}, true);
    const LanguageVerdict v = language_equal(a, b);
    CHECK_FALSE(v.closed_equal);
    CHECK(v.closed_witness == String{x, x});
    CHECK(language_equal(a, a).equal());

    const Automaton c = chain({x, y}, false);
    const LanguageVerdict m = language_equal(a, c);
    CHECK(m.closed_equal);
    CHECK_FALSE(m.marked_equal);
    CHECK(m.marked_witness == String{x, y});
    CHECK(language_included(c, a).closed_equal);
}

TEST_CASE("controllability and nonblocking on small automata") {
    const Event c = act(ControlLabel::RPlus), u = Event::collision_alarm();
    Automaton g;
    const StateId g0 = g.add_state("g0", true, true), g1 = g.add_state("g1", false, true);
    g.add_transition(g0, c, g1);
    g.add_transition(g1, u, g0);

    Automaton k = chain({c}, true);  // disables u after c
    const ControllabilityVerdict v = is_controllable(k, g);
    CHECK_FALSE(v.controllable);
    CHECK(v.violation == u);
    CHECK(v.prefix == String{c});
    CHECK(is_controllable(chain({}, true), g).controllable);  // disabling c is allowed

    Automaton blocking;
    const StateId b0 = blocking.add_state("b0", true, false), b1 = blocking.add_state("b1", false, true);
    const StateId b2 = blocking.add_state("b2");
    blocking.add_transition(b0, c, b1);
    blocking.add_transition(b0, u, b2);
    const NonblockingVerdict nb = check_nonblocking(blocking);
    CHECK_FALSE(nb.nonblocking);
    CHECK(nb.blocking_state == b2);
}

TEST_CASE("plant automaton structure") {
    const PlantModel g = build_plant(k3);
    const Partition p(k3);
    std::size_t moves = 0;
    for (const RegionIndex& r : p.regions()) moves += available_labels(k3, r).size() - 1;
    CHECK(g.automaton.size() == p.region_count() + moves);
    CHECK(g.automaton.initial_states().size() == p.region_count());

    const StateId r211 = g.region_state.at({2, 1, 1});
    CHECK(g.automaton.next(r211, Event::collision_alarm()) == r211);
    CHECK(g.automaton.next(r211, act(ControlLabel::Hold)) == r211);
    CHECK_FALSE(g.automaton.next(g.region_state.at({1, 1, 1}), Event::collision_alarm()));
    CHECK_FALSE(g.automaton.next(g.region_state.at({1, 1, 1}), act(ControlLabel::RMinus)));
    CHECK_FALSE(g.automaton.next(g.region_state.at({3, 1, 1}), act(ControlLabel::RPlus)));

    const String down{act(ControlLabel::RMinus), det({2, 1, 1}, {1, 1, 1})};
    CHECK(accepts_marked(g.automaton, down));
    const String wrap{act(ControlLabel::ThetaMinus), det({2, 1, 1}, {2, 3, 1})};
    CHECK(accepts(g.automaton, wrap));
    CHECK_FALSE(accepts_marked(g.automaton, wrap));
    // A detection can only follow the actuation that aims at it.
    CHECK_FALSE(accepts(g.automaton, String{act(ControlLabel::RPlus), det({2, 1, 1}, {1, 1, 1})}));
}

TEST_CASE("merged plant over-approximates the plant") {
    for (const PartitionSpec& s : {k3, k4}) {
        const PlantModel g = build_plant(s);
        const Automaton ref = refine_plant(g);
        CHECK(ref.size() == 10u);
        CHECK(language_included(g.automaton, ref).equal());
        const LanguageVerdict eq = language_equal(g.automaton, ref);
        CHECK_FALSE(eq.closed_equal);
        REQUIRE(eq.closed_witness.size() == 2u);
        CHECK(eq.closed_witness.front().controllable());
        CHECK(eq.closed_witness.back().is_detection());
        CHECK_FALSE(accepts(g.automaton, eq.closed_witness));
        CHECK(accepts(ref, eq.closed_witness));
    }
    const Bounded gb = enumerate(build_plant(k3).automaton, 4);
    const Bounded rb = enumerate(refine_plant(build_plant(k3)), 4);
    for (const String& s : gb.closed) CHECK(rb.closed.count(s));
}

TEST_CASE("supervisor languages against bounded enumeration") {
    const PlantModel g = build_plant(k3);
    const Supervisor sf = build_formation_supervisor(g);
    const Supervisor sc = build_collision_supervisor(g);
    const Automaton gsf = compose_with_plant(g, sf).automaton;
    const Automaton gsc = compose_with_plant(g, sc).automaton;
    const ClosedLoop cl = closed_loop(g, sf, sc);

    CHECK(language_equal(gsf, sf.realized.automaton).equal());
    CHECK(language_equal(gsc, sc.realized.automaton).equal());
    CHECK(language_equal(cl.automaton, compose_supervisors(sf, sc).automaton).equal());

    const int depth = 6;
    const Bounded bf = enumerate(sf.realized.automaton, depth), bgf = enumerate(gsf, depth);
    CHECK(bf.closed == bgf.closed);
    CHECK(bf.marked == bgf.marked);
    const Bounded bc = enumerate(sc.realized.automaton, depth), bcl = enumerate(cl.automaton, depth);
    // Closed loop strings are exactly the strings both supervisors admit.
    for (const String& s : bcl.closed) CHECK((bf.closed.count(s) && bc.closed.count(s)));
    for (const String& s : bf.closed)
        if (bc.closed.count(s)) CHECK(bcl.closed.count(s));
}

TEST_CASE("supervisors are controllable and the closed loop is nonblocking") {
    for (const PartitionSpec& s : {k3, k4}) {
        const CheckReport rep = des_checks(s);
        CAPTURE(rep.render());
        CHECK(rep.pass());
    }
}

TEST_CASE("mutated supervisors are caught") {
    const PlantModel g = build_plant(k3);
    SUBCASE("formation pattern that blocks the alarm") {
        Automaton pattern = formation_pattern(g);
        pattern.remove_transition(*pattern.find("P_f"), Event::collision_alarm());
        const Supervisor s = realize_supervisor(pattern, g, formation_coupling(pattern, g));
        Coupling starts;
        for (StateId x : s.realized.automaton.initial_states()) starts.emplace_back(x, s.realized.components[x].second);
        const ControllabilityVerdict v = is_controllable(s.realized.automaton, g.automaton, starts);
        CHECK_FALSE(v.controllable);
        CHECK(v.violation == Event::collision_alarm());
    }
    SUBCASE("collision pattern that never releases") {
        Automaton pattern = collision_pattern(g);
        const StateId ac = *pattern.find("A_c");
        for (const Event& e : g.automaton.alphabet())
            if (e.is_detection()) pattern.remove_transition(ac, e);
        const Supervisor s = realize_supervisor(pattern, g, collision_coupling(pattern, g));
        Coupling starts;
        for (StateId x : s.realized.automaton.initial_states()) starts.emplace_back(x, s.realized.components[x].second);
        const ControllabilityVerdict v = is_controllable(s.realized.automaton, g.automaton, starts);
        CHECK_FALSE(v.controllable);
        CHECK(v.violation->is_detection());
    }
    SUBCASE("unmarked shell 1 blocks") {
        const Supervisor sf = build_formation_supervisor(g);
        ClosedLoop cl = closed_loop(g, sf, build_collision_supervisor(g));
        for (StateId s = 0; s < cl.automaton.size(); ++s) cl.automaton.set_marked(s, false);
        CHECK_FALSE(check_nonblocking(cl.automaton).nonblocking);
    }
}

TEST_CASE("closed loop enables exactly one actuation") {
    const PlantModel g = build_plant(k3);
    const ClosedLoop cl = closed_loop(g, build_formation_supervisor(g), build_collision_supervisor(g));
    REQUIRE(cl.initial_for_region.size() == Partition(k3).region_count());
    for (const auto& [r, s] : cl.initial_for_region) {
        const auto en = cl.enabled_actuations(s);
        REQUIRE(en.size() == 1u);
        CHECK(en.front() == (r.i == 1 ? ControlLabel::Hold : ControlLabel::RMinus));
    }
    // After an alarm only C_theta+ remains, and the next theta detection
    // releases the formation supervisor back to C_r-.
    const StateId s0 = cl.initial_for_region.at({3, 1, 2});
    const auto s1 = cl.automaton.next(s0, Event::collision_alarm());
    REQUIRE(s1);
    CHECK(cl.enabled_actuations(*s1) == std::vector<ControlLabel>{ControlLabel::ThetaPlus});
    const auto s2 = cl.automaton.next(*s1, act(ControlLabel::ThetaPlus));
    REQUIRE(s2);
    const auto s3 = cl.automaton.next(*s2, det({3, 1, 2}, {3, 2, 2}));
    REQUIRE(s3);
    CHECK(cl.enabled_actuations(*s3) == std::vector<ControlLabel>{ControlLabel::RMinus});
}
