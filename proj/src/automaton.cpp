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

#include "sphform/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace sphform {

std::string to_string(const Event& e) {
    switch (e.kind) {
        case Event::Kind::Actuation: return to_string(e.label);
        case Event::Kind::Detection: return "d(" + to_string(e.from) + "," + to_string(e.to) + ")";
        case Event::Kind::External: return "ca";
    }
    return "?";
}

std::string to_string(const std::vector<Event>& s) {
    if (s.empty()) return "<eps>";
    std::string out;
    for (const Event& e : s) {
        if (!out.empty()) out += ' ';
        out += to_string(e);
    }
    return out;
}

}  // namespace sphform

namespace sphform::des {

namespace {

using Subset = std::vector<StateId>;
using SuccessorMap = std::map<Event, Subset>;

SuccessorMap successors(const Automaton& a, const Subset& s) {
    SuccessorMap out;
    for (StateId q : s)
        for (const auto& [e, t] : a.transitions(q)) out[e].push_back(t);
    for (auto& [e, v] : out) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return out;
}

bool any_marked(const Automaton& a, const Subset& s) {
    return std::any_of(s.begin(), s.end(), [&](StateId q) { return a.marked(q); });
}

struct Node {
    std::size_t parent;
    Event via;
};

// Roots are their own parent.
std::size_t root_of(const std::vector<Node>& nodes, std::size_t idx) {
    while (nodes[idx].parent != idx) idx = nodes[idx].parent;
    return idx;
}

std::vector<Event> trace(const std::vector<Node>& nodes, std::size_t idx) {
    std::vector<Event> out;
    while (nodes[idx].parent != idx) {
        out.push_back(nodes[idx].via);
        idx = nodes[idx].parent;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

struct PairHash {
    std::size_t operator()(const std::pair<StateId, StateId>& p) const noexcept {
        return (static_cast<std::size_t>(p.first) << 32) ^ p.second;
    }
};

}  // namespace

StateId Automaton::add_state(std::string name, bool initial, bool marked) {
    const auto id = static_cast<StateId>(names_.size());
    by_name_.emplace(name, id);
    names_.push_back(std::move(name));
    initial_.push_back(initial);
    marked_.push_back(marked);
    trans_.emplace_back();
    return id;
}

void Automaton::add_transition(StateId from, const Event& e, StateId to) {
    alphabet_.insert(e);
    auto& v = trans_[from];
    auto it = std::lower_bound(v.begin(), v.end(), e, [](const Transition& t, const Event& x) { return t.first < x; });
    if (it != v.end() && it->first == e)
        it->second = to;
    else
        v.insert(it, {e, to});
}

bool Automaton::remove_transition(StateId from, const Event& e) {
    auto& v = trans_[from];
    auto it = std::lower_bound(v.begin(), v.end(), e, [](const Transition& t, const Event& x) { return t.first < x; });
    if (it == v.end() || !(it->first == e)) return false;
    v.erase(it);
    return true;
}

std::size_t Automaton::transition_count() const {
    std::size_t n = 0;
    for (const auto& v : trans_) n += v.size();
    return n;
}

std::optional<StateId> Automaton::find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::vector<StateId> Automaton::initial_states() const {
    std::vector<StateId> out;
    for (StateId s = 0; s < size(); ++s)
        if (initial_[s]) out.push_back(s);
    return out;
}

std::optional<StateId> Automaton::next(StateId s, const Event& e) const {
    const auto& v = trans_[s];
    auto it = std::lower_bound(v.begin(), v.end(), e, [](const Transition& t, const Event& x) { return t.first < x; });
    if (it == v.end() || !(it->first == e)) return std::nullopt;
    return it->second;
}

Coupling full_coupling(const Automaton& a, const Automaton& b) {
    Coupling c;
    for (StateId x : a.initial_states())
        for (StateId y : b.initial_states()) c.emplace_back(x, y);
    return c;
}

Product parallel_compose(const Automaton& a, const Automaton& b, const Coupling& coupling) {
    Product p;
    std::unordered_map<std::pair<StateId, StateId>, StateId, PairHash> index;
    std::deque<StateId> work;
    auto intern = [&](StateId x, StateId y, bool init) {
        auto [it, fresh] = index.try_emplace({x, y}, 0);
        if (fresh) {
            it->second = p.automaton.add_state("(" + a.name(x) + "|" + b.name(y) + ")", init, a.marked(x) && b.marked(y));
            p.components.emplace_back(x, y);
            work.push_back(it->second);
        } else if (init) {
            p.automaton.set_initial(it->second, true);
        }
        return it->second;
    };
    for (const auto& [x, y] : coupling) intern(x, y, true);
    for (const Event& e : a.alphabet()) p.automaton.add_event(e);
    for (const Event& e : b.alphabet()) p.automaton.add_event(e);

    auto has_private = [](const Automaton& u, const Automaton& v) {
        for (const Event& e : u.alphabet())
            if (!v.in_alphabet(e)) return true;
        return false;
    };
    const bool a_private = has_private(a, b), b_private = has_private(b, a);

    // Shared events are matched from the side with fewer outgoing
    // transitions; patterns with self-loops on every detection event would
    // otherwise dominate the cost.
    while (!work.empty()) {
        const StateId s = work.front();
        work.pop_front();
        const auto [x, y] = p.components[s];
        const auto ta = a.transitions(x), tb = b.transitions(y);
        if (ta.size() <= tb.size()) {
            for (const auto& [e, x2] : ta) {
                if (b.in_alphabet(e)) {
                    if (auto y2 = b.next(y, e)) p.automaton.add_transition(s, e, intern(x2, *y2, false));
                } else {
                    p.automaton.add_transition(s, e, intern(x2, y, false));
                }
            }
            if (b_private)
                for (const auto& [e, y2] : tb)
                    if (!a.in_alphabet(e)) p.automaton.add_transition(s, e, intern(x, y2, false));
        } else {
            for (const auto& [e, y2] : tb) {
                if (a.in_alphabet(e)) {
                    if (auto x2 = a.next(x, e)) p.automaton.add_transition(s, e, intern(*x2, y2, false));
                } else {
                    p.automaton.add_transition(s, e, intern(x, y2, false));
                }
            }
            if (a_private)
                for (const auto& [e, x2] : ta)
                    if (!b.in_alphabet(e)) p.automaton.add_transition(s, e, intern(x2, y, false));
        }
    }
    return p;
}

std::string LanguageVerdict::describe() const {
    std::string out = std::string("L ") + (closed_equal ? "equal" : "differ");
    if (!closed_equal) out += " (witness: " + to_string(closed_witness) + ")";
    out += std::string(", L_m ") + (marked_equal ? "equal" : "differ");
    if (!marked_equal) out += " (witness: " + to_string(marked_witness) + ")";
    return out;
}

LanguageVerdict language_equal(const Automaton& a, const Automaton& b, std::size_t cap) {
    LanguageVerdict v;
    std::map<std::pair<Subset, Subset>, std::size_t> seen;
    std::vector<Node> nodes{{0, Event{}}};
    std::vector<std::pair<Subset, Subset>> keys;
    std::deque<std::size_t> work;

    auto init = std::make_pair(a.initial_states(), b.initial_states());
    if (init.first.empty() != init.second.empty()) {
        v.closed_equal = v.marked_equal = false;
        return v;
    }
    if (init.first.empty()) return v;
    seen.emplace(init, 0);
    keys.push_back(init);
    work.push_back(0);

    while (!work.empty()) {
        const std::size_t idx = work.front();
        work.pop_front();
        const auto [sa, sb] = keys[idx];
        if (v.marked_equal && any_marked(a, sa) != any_marked(b, sb)) {
            v.marked_equal = false;
            v.marked_witness = trace(nodes, idx);
        }
        SuccessorMap na = successors(a, sa), nb = successors(b, sb);
        std::set<Event> events;
        for (const auto& kv : na) events.insert(kv.first);
        for (const auto& kv : nb) events.insert(kv.first);
        for (const Event& e : events) {
            auto ia = na.find(e), ib = nb.find(e);
            Subset ta = ia == na.end() ? Subset{} : ia->second;
            Subset tb = ib == nb.end() ? Subset{} : ib->second;
            if ((ta.empty() || tb.empty()) && v.closed_equal) {
                v.closed_equal = false;
                v.closed_witness = trace(nodes, idx);
                v.closed_witness.push_back(e);
            }
            // One-sided pairs stay in the search so L_m differences further
            // down a string only one side accepts are still found.
            auto key = std::make_pair(std::move(ta), std::move(tb));
            if (seen.count(key)) continue;
            if (seen.size() >= cap) throw StateBlowup("language_equal: determinized product exceeds cap");
            seen.emplace(key, keys.size());
            nodes.push_back({idx, e});
            keys.push_back(std::move(key));
            work.push_back(keys.size() - 1);
        }
    }
    v.explored = keys.size();
    return v;
}

LanguageVerdict language_included(const Automaton& a, const Automaton& b, std::size_t cap) {
    for (const Event& e : a.alphabet())
        if (!b.in_alphabet(e))
            throw std::invalid_argument("language_included: event " + to_string(e) + " missing from second alphabet");
    return language_equal(a, parallel_compose(a, b, full_coupling(a, b)).automaton, cap);
}

std::string ControllabilityVerdict::describe() const {
    if (controllable) return "controllable";
    return "not controllable: " + to_string(*violation) + " disabled after " + to_string(prefix) +
           (start ? " from " + *start : "");
}

namespace {

// Subset-pair search from each start; seen pairs are shared because their
// continuations do not depend on the start that reached them.
ControllabilityVerdict controllable_from(const Automaton& k, const Automaton& g,
                                         const std::vector<std::pair<Subset, Subset>>& starts, std::size_t cap) {
    ControllabilityVerdict v;
    std::map<std::pair<Subset, Subset>, std::size_t> seen;
    std::vector<Node> nodes;
    std::vector<std::pair<Subset, Subset>> keys;
    for (const auto& init : starts) {
        if (init.first.empty() || init.second.empty() || seen.count(init)) continue;
        std::deque<std::size_t> work;
        seen.emplace(init, keys.size());
        nodes.push_back({keys.size(), Event{}});
        keys.push_back(init);
        work.push_back(keys.size() - 1);

        while (!work.empty()) {
            const std::size_t idx = work.front();
            work.pop_front();
            const auto [sk, sg] = keys[idx];
            SuccessorMap nk = successors(k, sk), ng = successors(g, sg);
            for (const auto& [e, tg] : ng) {
                auto ik = nk.find(e);
                if (ik == nk.end()) {
                    if (!e.controllable()) {
                        v.controllable = false;
                        v.prefix = trace(nodes, idx);
                        v.violation = e;
                        const auto& start = keys[root_of(nodes, idx)].second;
                        if (start.size() == 1) v.start = g.name(start.front());
                        return v;
                    }
                    continue;
                }
                auto key = std::make_pair(ik->second, tg);
                if (seen.count(key)) continue;
                if (seen.size() >= cap) throw StateBlowup("is_controllable: product exceeds cap");
                seen.emplace(key, keys.size());
                nodes.push_back({idx, e});
                keys.push_back(std::move(key));
                work.push_back(keys.size() - 1);
            }
        }
    }
    return v;
}

}  // namespace

ControllabilityVerdict is_controllable(const Automaton& k, const Automaton& g, std::size_t cap) {
    return controllable_from(k, g, {{k.initial_states(), g.initial_states()}}, cap);
}

ControllabilityVerdict is_controllable(const Automaton& k, const Automaton& g, const Coupling& starts,
                                       std::size_t cap) {
    std::vector<std::pair<Subset, Subset>> s;
    for (const auto& [x, y] : starts) s.push_back({{x}, {y}});
    return controllable_from(k, g, s, cap);
}

std::vector<StateId> reachable_states(const Automaton& a) {
    std::vector<char> seen(a.size(), 0);
    std::deque<StateId> work;
    for (StateId s : a.initial_states()) {
        seen[s] = 1;
        work.push_back(s);
    }
    std::vector<StateId> out;
    while (!work.empty()) {
        const StateId s = work.front();
        work.pop_front();
        out.push_back(s);
        for (const auto& [e, t] : a.transitions(s))
            if (!seen[t]) {
                seen[t] = 1;
                work.push_back(t);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

NonblockingVerdict check_nonblocking(const Automaton& a) {
    NonblockingVerdict v;
    const auto reach = reachable_states(a);
    v.reachable = reach.size();
    std::vector<std::vector<StateId>> rev(a.size());
    for (StateId s : reach)
        for (const auto& [e, t] : a.transitions(s)) rev[t].push_back(s);
    std::vector<char> coreach(a.size(), 0);
    std::deque<StateId> work;
    for (StateId s : reach)
        if (a.marked(s)) {
            coreach[s] = 1;
            work.push_back(s);
        }
    while (!work.empty()) {
        const StateId s = work.front();
        work.pop_front();
        for (StateId p : rev[s])
            if (!coreach[p]) {
                coreach[p] = 1;
                work.push_back(p);
            }
    }
    for (StateId s : reach)
        if (!coreach[s]) {
            v.nonblocking = false;
            v.blocking_state = s;
            break;
        }
    return v;
}

std::optional<std::vector<StateId>> run_string(const Automaton& a, std::span<const Event> s) {
    Subset cur = a.initial_states();
    for (const Event& e : s) {
        Subset nxt;
        for (StateId q : cur)
            if (auto t = a.next(q, e)) nxt.push_back(*t);
        std::sort(nxt.begin(), nxt.end());
        nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
        if (nxt.empty()) return std::nullopt;
        cur = std::move(nxt);
    }
    if (cur.empty()) return std::nullopt;
    return cur;
}

bool accepts(const Automaton& a, std::span<const Event> s) { return run_string(a, s).has_value(); }

bool accepts_marked(const Automaton& a, std::span<const Event> s) {
    auto r = run_string(a, s);
    return r && any_marked(a, *r);
}

}  // namespace sphform::des
