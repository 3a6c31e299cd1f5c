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

#include "sphform/multiaffine.hpp"

#include <optional>
#include <vector>

namespace sphform {

struct SpeedBound {
    double v_max = 0.0;
    bool contains(const Vec3& u) const { return u.norm() <= v_max; }
};

enum class EligibleMode { Derived, Paper };

std::string to_string(EligibleMode m);
EligibleMode parse_eligible_mode(const std::string& s);  // throws InvalidSpec

// Exact extremes of n(y).d over a closed facet (closed form, no sampling).
double facet_sup(const RegionBox& box, FacetId f, const Vec3& d);
double facet_inf(const RegionBox& box, FacetId f, const Vec3& d);

struct AngularInterval {
    double lo = 0, hi = 0;  // open interval, unnormalized
    bool empty() const { return !(lo < hi); }
    double mid() const { return (lo + hi) / 2; }
};

// Maps unnormalized angles back onto theta in [0, 2pi), phi in [0, pi]. A
// phi outside [0, pi] is reflected and theta is shifted by pi.
SphericalPoint range(double theta, double phi);

struct DirectionBox {
    AngularInterval theta, phi;
    bool empty() const { return theta.empty() || phi.empty(); }
    // Membership through either preimage branch of range().
    bool contains(const Vec3& d) const;
    Vec3 midpoint_direction() const;
};

enum class Sense { Inward, Outward };

struct FacetConstraint {
    FacetId facet;
    Sense sense;
};

// Set of unit directions satisfying strict facet constraints. In Derived mode
// it is the exact half-space intersection; in Paper mode it additionally
// carries the printed direction box, whose midpoint is the first candidate.
class EligibleSet {
  public:
    EligibleSet(const RegionBox& box, std::vector<FacetConstraint> constraints, EligibleMode mode,
                std::optional<DirectionBox> printed = std::nullopt);

    EligibleMode mode() const { return mode_; }
    const std::vector<FacetConstraint>& constraints() const { return constraints_; }
    const std::optional<DirectionBox>& printed() const { return printed_; }

    // min over constraints of the strict slack; > 0 iff d satisfies them all.
    double margin(const Vec3& d) const;
    bool contains(const Vec3& d) const;
    bool empty() const { return !(best_margin_ > 0.0); }
    // Unit direction. Derived: max-margin direction. Paper: printed midpoint.
    Vec3 representative() const;
    double best_margin() const { return best_margin_; }
    const Vec3& best_direction() const { return best_; }

  private:
    RegionBox box_;
    std::vector<FacetConstraint> constraints_;
    EligibleMode mode_;
    std::optional<DirectionBox> printed_;
    Vec3 best_ = Vec3::UnitX();
    double best_margin_ = -1.0;
};

// Non-degenerate facets whose closure contains the geometric point of
// logical vertex m (a superset of the facets with m in V(F)).
std::vector<FacetId> facets_at_vertex(const RegionBox& box, int m);

EligibleSet eligible_invariant_set(const RegionBox& box, int m, EligibleMode mode = EligibleMode::Derived);
EligibleSet eligible_exit_set(const RegionBox& box, FacetId exit, int m, EligibleMode mode = EligibleMode::Derived);
EligibleSet eligible_invariant_set(const Partition& p, const RegionIndex& r, int m,
                                   EligibleMode mode = EligibleMode::Derived);
EligibleSet eligible_exit_set(const Partition& p, const RegionIndex& r, FacetId exit, int m,
                              EligibleMode mode = EligibleMode::Derived);

// Printed interval boxes; nullopt when the formula is not printed for that
// facet (every exit facet other than F_r-).
DirectionBox paper_invariant_box(const RegionBox& box, int m);
std::optional<DirectionBox> paper_exit_box(const RegionBox& box, FacetId exit, int m);

const std::vector<Vec3>& fibonacci_sphere(std::size_t n);

struct VertexControls {
    std::array<Vec3, 8> u{};
    ControlLabel label = ControlLabel::Hold;
};

struct SynthesisOptions {
    EligibleMode mode = EligibleMode::Derived;
    double kappa = 0.8;
    int verify_samples = 8;
};

struct VertexDiagnostic {
    int vertex = 0;
    bool eligible_empty = false;
    bool used_fallback = false;
    double margin = 0.0;  // exact unit-direction margin of the chosen direction
};

class Infeasible : public Error {
  public:
    Infeasible(RegionIndex region, ControlLabel label, std::vector<VertexDiagnostic> diag, const std::string& why);
    RegionIndex region;
    ControlLabel label;
    std::vector<VertexDiagnostic> diagnostics;
};

struct SynthesisResult {
    VertexControls controls;
    std::array<VertexDiagnostic, 8> diagnostics{};
};

SynthesisResult synthesize_detailed(const RegionBox& box, ControlLabel label, SpeedBound bound,
                                    const SynthesisOptions& opt = {}, RegionIndex tag = {});
VertexControls synthesize(const Partition& p, const RegionIndex& r, ControlLabel label, SpeedBound bound,
                          const SynthesisOptions& opt = {});

struct CertificateReport {
    bool pass = false;
    // Invariant: max n.u over all sampled (facet, y, m in V(F)); must be < 0.
    // Exit: max over non-exit facets (condition 1).
    double worst_margin = 0.0;
    // Exit only: min n_exit.u over the exit facet and all eight vertices
    // (condition 2); must be > 0.
    double exit_margin = 0.0;
    std::vector<FacetId> degenerate;
};

CertificateReport verify_invariant(const RegionBox& box, const VertexControls& c, int samples = 8);
CertificateReport verify_exit(const RegionBox& box, FacetId exit, const VertexControls& c, int samples = 8);
CertificateReport verify_invariant(const Partition& p, const RegionIndex& r, const VertexControls& c,
                                   int samples = 8);
CertificateReport verify_exit(const Partition& p, const RegionIndex& r, FacetId exit, const VertexControls& c,
                              int samples = 8);
CertificateReport verify_label(const RegionBox& box, const VertexControls& c, int samples = 8);

}  // namespace sphform
