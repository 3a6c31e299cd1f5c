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

#include "sphform/runtime.hpp"

#include <cstdint>
#include <random>

namespace sphform {

class InfeasibleController : public Error {
  public:
    InfeasibleController(RegionIndex r, ControlLabel l, const std::string& why)
        : Error("no feasible " + to_string(l) + " controller on " + to_string(r) + (why.empty() ? "" : ": " + why)),
          region(r),
          label(l) {}
    RegionIndex region;
    ControlLabel label;
};

using FeasibilityMap = std::map<RegionIndex, std::vector<ControlLabel>>;
using ControllerTable = std::map<std::pair<RegionIndex, ControlLabel>, VertexControls>;

struct SweepFailure {
    RegionIndex region;
    ControlLabel label;
    std::string reason;
};

struct SynthesisSweep {
    ControllerTable controls;
    FeasibilityMap feasible;  // only labels that synthesized
    std::map<std::pair<RegionIndex, ControlLabel>, CertificateReport> reports;
    std::vector<SweepFailure> failures;
};

// Synthesizes every available label on the given regions (all regions when
// empty) and records certificate margins.
SynthesisSweep synthesize_all(const Partition& p, SpeedBound bound, const SynthesisOptions& opt = {},
                              const std::vector<RegionIndex>& regions = {});

// States are named as in the plant automaton ("R[i,j,k]", "d([..],[..])").
// Throws InfeasibleController when an available label is missing.
des::Automaton build_abstract_ts(const Partition& p, const FeasibilityMap& feasible);

struct TransitionConfig {
    double step_s = 0.01;
    double bracket_s = 1e-6;
    double hold_timeout_s = 60.0;
    double exit_timeout_s = 0.0;  // 0: 4 * diameter / (kappa * v_max)
    double kappa = 0.8;
    double v_max = 0.0;           // used for the default exit timeout
};

struct TransitionOutcome {
    enum class Kind {
        Crossed,            // exit label reached its target detection element
        Invariant,          // C_0 stayed inside until the timeout
        CrossedWrongFacet,  // left through another facet
        EdgeGraze,
        SkippedRegion,
        Timeout,            // exit label never left
        LeftHorizon,
    };
    Kind kind = Kind::Timeout;
    double time = 0.0;
    Vec3 point = Vec3::Zero();
    std::optional<Event> event;

    bool ok() const { return kind == Kind::Crossed || kind == Kind::Invariant; }
};

std::string to_string(TransitionOutcome::Kind k);

double region_diameter(const RegionBox& box);

// Integrates the interpolated field from x0 (strictly inside the region).
TransitionOutcome continuous_transition(const Partition& p, const RegionIndex& region, ControlLabel label,
                                        const Vec3& x0, const VertexControls& controls, const TransitionConfig& cfg);

struct BisimulationVerdict {
    bool bisimilar = false;
    std::optional<std::pair<std::string, std::string>> pair;  // first refuted pair
    std::optional<Event> event;                               // distinguishing event
    std::string reason;
};

using Relation = std::vector<std::pair<des::StateId, des::StateId>>;

Relation label_identity(const des::Automaton& a, const des::Automaton& b);
BisimulationVerdict check_bisimulation_finite(const des::Automaton& a, const des::Automaton& b, const Relation& seed);

// Platform-independent draw in [0, 1).
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Volume-uniform sample of the region shrunk by margin (fraction per axis).
Vec3 sample_interior(const RegionBox& box, std::mt19937_64& rng, double margin = 0.02);

struct PairReport {
    RegionIndex region;
    ControlLabel label;
    int trials = 0;
    int failures = 0;
    std::map<TransitionOutcome::Kind, int> by_kind;
    double certificate_margin = 0.0;  // worst sampled certificate margin
    std::string note;
};

struct SoundnessReport {
    bool pass = true;
    bool vacuous = false;
    std::vector<PairReport> pairs;
    std::vector<SweepFailure> infeasible;
    int total_runs = 0;
    int total_failures = 0;
};

struct SoundnessOptions {
    int trials = 20;
    std::uint64_t seed = 1;
    TransitionConfig transition;
    std::vector<RegionIndex> regions;  // empty: all regions
};

SoundnessReport monte_carlo_soundness(const Partition& p, const SynthesisSweep& sweep, const SoundnessOptions& opt);

}  // namespace sphform
