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

#include "sphform/automaton.hpp"
#include "sphform/partition.hpp"

#include <map>

namespace sphform::des {

// Boundary availability of actuation labels (theta always wraps).
bool available(const PartitionSpec& spec, const RegionIndex& r, ControlLabel l);
std::vector<ControlLabel> available_labels(const PartitionSpec& spec, const RegionIndex& r);

std::string region_state_name(const RegionIndex& r);                              // "R[i,j,k]"
std::string detection_state_name(const RegionIndex& a, const RegionIndex& b);     // "d([..],[..])"

struct PlantModel {
    PartitionSpec spec;
    Automaton automaton;
    std::map<RegionIndex, StateId> region_state;
    std::vector<std::optional<RegionIndex>> state_region;  // set for region states

    bool is_region_state(StateId s) const { return state_region[s].has_value(); }
};

PlantModel build_plant(const PartitionSpec& spec);

enum class MergedState { P, P1, Pn, N, N1, Nn, R, R1, Rn, D };

std::string to_string(MergedState m);
// Class by radial band (1 / interior / n_r-1) and phi band (1 / interior /
// n_phi-1). Shell 1 wins when n_r = 2.
MergedState merged_class(const PartitionSpec& spec, const RegionIndex& r);
std::set<ControlLabel> gamma_c(MergedState m);

// Nine merged region states plus D. Merged states carry C_0 and, off shell
// 1, ca self-loops; D emits every detection event of G into the class of
// the entered region.
Automaton refine_plant(const PlantModel& g);

// Supervisor = pattern automaton composed with G, so L(S) is a sublanguage
// of L(G). The pattern is kept for inspection and mutation tests.
struct Supervisor {
    Automaton pattern;
    Product realized;  // pattern || G; components = (pattern state, G state)
};

Automaton formation_pattern(const PlantModel& g);  // states P_f, R_f, A_f
Automaton collision_pattern(const PlantModel& g);  // states N_c, A_c

Coupling formation_coupling(const Automaton& pattern, const PlantModel& g);
Coupling collision_coupling(const Automaton& pattern, const PlantModel& g);

Supervisor realize_supervisor(Automaton pattern, const PlantModel& g, const Coupling& coupling);
Supervisor build_formation_supervisor(const PlantModel& g);
Supervisor build_collision_supervisor(const PlantModel& g);

// S1 || S2 with initial pairs matched on the plant component.
Product compose_supervisors(const Supervisor& s1, const Supervisor& s2);
// G || S with initial pairs matched on the plant component.
Product compose_with_plant(const PlantModel& g, const Supervisor& s);

struct ClosedLoop {
    Automaton automaton;
    std::vector<StateId> plant_state;                 // G component per state
    std::map<RegionIndex, StateId> initial_for_region;

    std::vector<ControlLabel> enabled_actuations(StateId s) const;
};

ClosedLoop closed_loop(const PlantModel& g, const Supervisor& sf, const Supervisor& sc);

}  // namespace sphform::des
