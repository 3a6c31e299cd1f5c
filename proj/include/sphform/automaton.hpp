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

#include "sphform/event.hpp"

#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sphform::des {

using StateId = std::uint32_t;
using Transition = std::pair<Event, StateId>;

SPHFORM_DEFINE_ERROR(StateBlowup);

// Deterministic finite automaton with a set of initial states. Transitions
// of each state are kept sorted by event.
class Automaton {
  public:
    StateId add_state(std::string name, bool initial = false, bool marked = false);
    void add_event(const Event& e) { alphabet_.insert(e); }
    // Adds e to the alphabet; overwrites an existing (from, e) entry.
    void add_transition(StateId from, const Event& e, StateId to);
    bool remove_transition(StateId from, const Event& e);

    std::size_t size() const { return names_.size(); }
    std::size_t transition_count() const;
    const std::string& name(StateId s) const { return names_[s]; }
    std::optional<StateId> find(std::string_view name) const;
    bool initial(StateId s) const { return initial_[s]; }
    bool marked(StateId s) const { return marked_[s]; }
    void set_initial(StateId s, bool v) { initial_[s] = v; }
    void set_marked(StateId s, bool v) { marked_[s] = v; }
    std::vector<StateId> initial_states() const;

    std::optional<StateId> next(StateId s, const Event& e) const;
    std::span<const Transition> transitions(StateId s) const { return trans_[s]; }
    const std::set<Event>& alphabet() const { return alphabet_; }
    bool in_alphabet(const Event& e) const { return alphabet_.count(e) != 0; }

  private:
    std::vector<std::string> names_;
    std::vector<char> initial_, marked_;
    std::vector<std::vector<Transition>> trans_;
    std::set<Event> alphabet_;
    std::unordered_map<std::string, StateId> by_name_;
};

using Coupling = std::vector<std::pair<StateId, StateId>>;

Coupling full_coupling(const Automaton& a, const Automaton& b);

struct Product {
    Automaton automaton;
    std::vector<std::pair<StateId, StateId>> components;  // per product state
};

// Synchronous on shared events, interleaving on private ones; only the part
// reachable from the coupled initial pairs is built.
Product parallel_compose(const Automaton& a, const Automaton& b, const Coupling& coupling);

struct LanguageVerdict {
    bool closed_equal = true;  // L
    bool marked_equal = true;  // L_m
    std::vector<Event> closed_witness;
    std::vector<Event> marked_witness;
    std::size_t explored = 0;

    bool equal() const { return closed_equal && marked_equal; }
    std::string describe() const;
};

LanguageVerdict language_equal(const Automaton& a, const Automaton& b, std::size_t cap = 1'000'000);

// L(a) subset of L(b), checked as L(a) = L(a || b). Requires the alphabet of
// a to lie in that of b (throws std::invalid_argument otherwise).
LanguageVerdict language_included(const Automaton& a, const Automaton& b, std::size_t cap = 1'000'000);

struct ControllabilityVerdict {
    bool controllable = true;
    std::vector<Event> prefix;
    std::optional<Event> violation;
    std::optional<std::string> start;  // plant state the prefix starts from, when known
    std::string describe() const;
};

// Uncontrollable events are those with !Event::controllable().
ControllabilityVerdict is_controllable(const Automaton& k, const Automaton& g, std::size_t cap = 1'000'000);

// Same check started from each coupled pair (k state, g state) separately,
// for supervisors initialized with the plant's known initial state.
ControllabilityVerdict is_controllable(const Automaton& k, const Automaton& g, const Coupling& starts,
                                       std::size_t cap = 1'000'000);

struct NonblockingVerdict {
    bool nonblocking = true;
    std::optional<StateId> blocking_state;
    std::size_t reachable = 0;
};

NonblockingVerdict check_nonblocking(const Automaton& a);

std::vector<StateId> reachable_states(const Automaton& a);

// Subset simulation from the initial set; nullopt if s is not in L(a).
std::optional<std::vector<StateId>> run_string(const Automaton& a, std::span<const Event> s);
bool accepts(const Automaton& a, std::span<const Event> s);         // s in L(a)
bool accepts_marked(const Automaton& a, std::span<const Event> s);  // s in L_m(a)

}  // namespace sphform::des
