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

#include "sphform/abstraction.hpp"

namespace sphform {

struct CheckLine {
    std::string name;
    bool pass = false;
    bool gating = true;  // informational lines never fail a report
    std::string detail;
};

struct CheckReport {
    std::vector<CheckLine> lines;
    bool pass() const;
    std::string render() const;  // one "PASS|FAIL|INFO name: detail" line each
};

// Language, controllability and nonblocking verdicts for the supervisors on
// one partition. Equality with the merged plant is informational; the gated
// refinement check is inclusion.
CheckReport des_checks(const PartitionSpec& spec);

// One line per (region, label) with its certificate margins.
CheckReport synth_checks(const Partition& p, SpeedBound bound, const SynthesisOptions& opt);

CheckReport abstraction_checks(const Partition& p, SpeedBound bound, const SynthesisOptions& opt,
                               const SoundnessOptions& mc);

}  // namespace sphform
