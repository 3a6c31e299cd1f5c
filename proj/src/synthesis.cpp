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

#include "sphform/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

namespace sphform {

namespace {

constexpr std::size_t kSeedGrid = 512;
constexpr std::size_t kFallbackGrid = 2000;

// max of cos(x - c) for x in [a, b]
double max_cos(double a, double b, double c) {
    const double t = c + kTwoPi * std::ceil((a - c) / kTwoPi);
    if (t <= b) return 1.0;
    return std::max(std::cos(a - c), std::cos(b - c));
}

// Smallest representative of v + 2pi*n strictly above lo; true iff below hi.
bool in_open(double v, const AngularInterval& iv) {
    if (iv.empty()) return false;
    double t = v + kTwoPi * std::ceil((iv.lo - v) / kTwoPi);
    if (t <= iv.lo) t += kTwoPi;
    return t < iv.hi;
}

Vec3 pattern_search(const EligibleSet& set, Vec3 d, double& f) {
    double step = 0.1;
    for (int iter = 0; iter < 600 && step > 1e-10; ++iter) {
        const Vec3 t1 = (std::abs(d.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(d).normalized();
        const Vec3 t2 = d.cross(t1);
        Vec3 best = d;
        double fb = f;
        for (int k = 0; k < 16; ++k) {
            const double a = k * kPi / 8;
            const Vec3 c = (d + step * (std::cos(a) * t1 + std::sin(a) * t2)).normalized();
            const double fc = set.margin(c);
            if (fc > fb) {
                fb = fc;
                best = c;
            }
        }
        if (fb > f) {
            d = best;
            f = fb;
        } else {
            step *= 0.5;
        }
    }
    return d;
}

void sample_facet(const RegionBox& box, FacetId f, int n, const auto& visit) {
    auto at = [&](double a, double b) {
        const SphericalPoint y = box.facet_point(f, a, b);
        visit(facet_normal(f, y.theta, y.phi));
    };
    for (int ia = 0; ia < n; ++ia)
        for (int ib = 0; ib < n; ++ib) at((ia + 0.5) / n, (ib + 0.5) / n);
    at(0, 0);
    at(0, 1);
    at(1, 0);
    at(1, 1);
}

}  // namespace

std::string to_string(EligibleMode m) { return m == EligibleMode::Derived ? "derived" : "paper"; }

EligibleMode parse_eligible_mode(const std::string& s) {
    if (s == "derived") return EligibleMode::Derived;
    if (s == "paper") return EligibleMode::Paper;
    throw InvalidSpec("eligible_set_mode must be 'derived' or 'paper', got '" + s + "'");
}

double facet_sup(const RegionBox& box, FacetId f, const Vec3& d) {
    const double rho = std::hypot(d.x(), d.y());
    const double tw = std::atan2(d.y(), d.x());
    const double a_max = rho * max_cos(box.th_lo, box.th_hi, tw);
    const double a_min = -rho * max_cos(box.th_lo, box.th_hi, tw + kPi);
    const double s = f.side == Side::Plus ? 1.0 : -1.0;
    switch (f.axis) {
        case Axis::R: {
            // sin(phi) * max_theta(s * A) + cos(phi) * s * dz, maximized over phi
            const double a = s > 0 ? a_max : -a_min;
            const double b = s * d.z();
            const double h = std::hypot(a, b);
            return h == 0.0 ? 0.0 : h * max_cos(box.ph_lo, box.ph_hi, std::atan2(a, b));
        }
        case Axis::Theta: return s * unit_theta(box.facet_value(f)).dot(d);
        case Axis::Phi: {
            const double p0 = box.facet_value(f);
            const double c = s * std::cos(p0);
            return (c >= 0 ? c * a_max : c * a_min) - s * std::sin(p0) * d.z();
        }
    }
    return 0.0;
}

double facet_inf(const RegionBox& box, FacetId f, const Vec3& d) { return -facet_sup(box, f, -d); }

SphericalPoint range(double theta, double phi) {
    double p = std::fmod(phi, kTwoPi);
    if (p < 0) p += kTwoPi;
    if (p > kPi) {
        p = kTwoPi - p;
        theta += kPi;
    }
    return {1.0, wrap_angle(theta), p};
}

bool DirectionBox::contains(const Vec3& d) const {
    const SphericalPoint s = to_spherical(d);
    if (in_open(s.theta, theta) && in_open(s.phi, phi)) return true;
    return in_open(s.theta + kPi, theta) && in_open(-s.phi, phi);
}

Vec3 DirectionBox::midpoint_direction() const {
    const SphericalPoint s = range(theta.mid(), phi.mid());
    return unit_r(s.theta, s.phi);
}

EligibleSet::EligibleSet(const RegionBox& box, std::vector<FacetConstraint> constraints, EligibleMode mode,
                         std::optional<DirectionBox> printed)
    : box_(box), constraints_(std::move(constraints)), mode_(mode), printed_(std::move(printed)) {
    const auto& grid = fibonacci_sphere(kSeedGrid);
    for (const Vec3& d : grid) {
        const double m = margin(d);
        if (m > best_margin_) {
            best_margin_ = m;
            best_ = d;
        }
    }
    best_ = pattern_search(*this, best_, best_margin_);
}

double EligibleSet::margin(const Vec3& d) const {
    double m = std::numeric_limits<double>::infinity();
    for (const FacetConstraint& c : constraints_) {
        const double slack = c.sense == Sense::Inward ? -facet_sup(box_, c.facet, d) : facet_inf(box_, c.facet, d);
        m = std::min(m, slack);
    }
    return std::isinf(m) ? 1.0 : m;
}

bool EligibleSet::contains(const Vec3& d) const {
    if (mode_ == EligibleMode::Paper && printed_) return printed_->contains(d);
    return margin(d) > 0.0;
}

Vec3 EligibleSet::representative() const {
    if (mode_ == EligibleMode::Paper && printed_) return printed_->midpoint_direction();
    return best_;
}

std::vector<FacetId> facets_at_vertex(const RegionBox& box, int m) {
    const bool origin = box.vertex_at_origin(m);
    const bool axis = origin || box.vertex_on_axis(m);
    std::vector<FacetId> out;
    for (FacetId f : kAllFacets) {
        if (box.facet_degenerate(f)) continue;
        const bool logical = vertex_bit(m, f.axis) == static_cast<int>(f.side);
        bool on = logical;
        if (f.axis == Axis::Theta) on = logical || axis;
        if (f.axis == Axis::Phi) on = logical || origin;
        if (f.axis == Axis::R) on = logical && !origin;
        if (on) out.push_back(f);
    }
    return out;
}

DirectionBox paper_invariant_box(const RegionBox& b, int m) {
    const double tj = b.th_lo, tj1 = b.th_hi, pk = b.ph_lo, pk1 = b.ph_hi;
    const double h = kPi / 2;
    switch (m) {
        case 0: return {{tj, tj + h}, {pk, pk + h}};
        case 1: return {{tj1 + h, tj + kPi}, {pk1 + h, pk + kPi}};
        case 2: return {{tj1 - h, tj1}, {pk, pk + h}};
        case 3: return {{tj1 - kPi, tj + 3 * h}, {pk1 + h, pk + kPi}};
        case 4: return {{tj, tj + h}, {pk1 - h, pk1}};
        case 5: return {{tj1 + h, tj + kPi}, {pk1 + kPi, pk + 3 * h}};
        case 6: return {{tj1 - h, tj1}, {pk1 - h, pk1}};
        case 7: return {{tj1 + kPi, tj + 3 * h}, {pk1 + kPi, pk + 3 * h}};
        default: break;
    }
    throw Error("vertex index out of range");
}

std::optional<DirectionBox> paper_exit_box(const RegionBox& b, FacetId exit, int m) {
    if (!(exit.axis == Axis::R && exit.side == Side::Minus)) return std::nullopt;
    const double tj = b.th_lo, tj1 = b.th_hi, pk = b.ph_lo, pk1 = b.ph_hi;
    const double h = kPi / 2;
    switch (m / 2) {
        case 0: return DirectionBox{{tj1 + h, tj + kPi}, {pk1 + h, pk + kPi}};
        case 1: return DirectionBox{{tj1 + h, tj + kPi}, {pk1 + kPi, pk + 3 * h}};
        case 2: return DirectionBox{{tj1 + kPi, tj + 3 * h}, {pk1 + h, pk + kPi}};
        case 3: return DirectionBox{{tj + kPi, tj + 3 * h}, {pk1 + kPi, pk + 3 * h}};
        default: break;
    }
    throw Error("vertex index out of range");
}

EligibleSet eligible_invariant_set(const RegionBox& box, int m, EligibleMode mode) {
    std::vector<FacetConstraint> cs;
    for (FacetId f : facets_at_vertex(box, m)) cs.push_back({f, Sense::Inward});
    std::optional<DirectionBox> printed;
    if (mode == EligibleMode::Paper) printed = paper_invariant_box(box, m);
    return EligibleSet(box, std::move(cs), mode, printed);
}

EligibleSet eligible_exit_set(const RegionBox& box, FacetId exit, int m, EligibleMode mode) {
    if (box.facet_degenerate(exit)) throw DegenerateFacet(to_string(exit) + " has zero area and cannot be an exit");
    std::vector<FacetConstraint> cs{{exit, Sense::Outward}};
    for (FacetId f : facets_at_vertex(box, m))
        if (f != exit) cs.push_back({f, Sense::Inward});
    std::optional<DirectionBox> printed;
    if (mode == EligibleMode::Paper) printed = paper_exit_box(box, exit, m);
    return EligibleSet(box, std::move(cs), mode, printed);
}

EligibleSet eligible_invariant_set(const Partition& p, const RegionIndex& r, int m, EligibleMode mode) {
    return eligible_invariant_set(p.box(r), m, mode);
}

EligibleSet eligible_exit_set(const Partition& p, const RegionIndex& r, FacetId exit, int m, EligibleMode mode) {
    return eligible_exit_set(p.box(r), exit, m, mode);
}

const std::vector<Vec3>& fibonacci_sphere(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::unique_ptr<std::vector<Vec3>>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<std::vector<Vec3>>();
        slot->reserve(n);
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        for (std::size_t i = 0; i < n; ++i) {
            const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double a = golden * static_cast<double>(i);
            slot->emplace_back(rad * std::cos(a), rad * std::sin(a), z);
        }
    }
    return *slot;
}

Infeasible::Infeasible(RegionIndex r, ControlLabel l, std::vector<VertexDiagnostic> diag, const std::string& why)
    : Error("infeasible " + to_string(l) + " on " + to_string(r) + ": " + why),
      region(r),
      label(l),
      diagnostics(std::move(diag)) {}

SynthesisResult synthesize_detailed(const RegionBox& box, ControlLabel label, SpeedBound bound,
                                    const SynthesisOptions& opt, RegionIndex tag) {
    SynthesisResult res;
    res.controls.label = label;
    std::vector<VertexDiagnostic> failed;
    for (int m = 0; m < 8; ++m) {
        const EligibleSet es = label == ControlLabel::Hold ? eligible_invariant_set(box, m, opt.mode)
                                                           : eligible_exit_set(box, exit_facet(label), m, opt.mode);
        VertexDiagnostic& dg = res.diagnostics[m];
        dg.vertex = m;
        dg.eligible_empty = es.mode() == EligibleMode::Paper && es.printed() ? es.printed()->empty() : es.empty();
        Vec3 d = es.representative();
        dg.margin = es.margin(d);
        if (!(dg.margin > 0.0)) {
            dg.used_fallback = true;
            for (const Vec3& c : fibonacci_sphere(kFallbackGrid)) {
                if (es.margin(c) > 0.0) {
                    d = c;
                    dg.margin = es.margin(c);
                    break;
                }
            }
        }
        if (!(dg.margin > 0.0)) failed.push_back(dg);
        res.controls.u[m] = opt.kappa * bound.v_max * d;
    }
    if (!failed.empty()) throw Infeasible(tag, label, failed, "no direction satisfies the certificate");
    const CertificateReport rep = verify_label(box, res.controls, opt.verify_samples);
    if (!rep.pass) {
        throw Infeasible(tag, label, {res.diagnostics.begin(), res.diagnostics.end()},
                         "sampled certificate fails (speed bound " + std::to_string(bound.v_max) + ")");
    }
    return res;
}

VertexControls synthesize(const Partition& p, const RegionIndex& r, ControlLabel label, SpeedBound bound,
                          const SynthesisOptions& opt) {
    return synthesize_detailed(p.box(r), label, bound, opt, r).controls;
}

CertificateReport verify_invariant(const RegionBox& box, const VertexControls& c, int samples) {
    CertificateReport rep;
    rep.worst_margin = -std::numeric_limits<double>::infinity();
    for (FacetId f : kAllFacets) {
        if (box.facet_degenerate(f)) {
            rep.degenerate.push_back(f);
            continue;
        }
        const auto vs = facet_vertices(f);
        sample_facet(box, f, samples, [&](const Vec3& n) {
            for (int m : vs) rep.worst_margin = std::max(rep.worst_margin, n.dot(c.u[m]));
        });
    }
    rep.pass = rep.worst_margin < 0.0;
    return rep;
}

CertificateReport verify_exit(const RegionBox& box, FacetId exit, const VertexControls& c, int samples) {
    CertificateReport rep;
    rep.worst_margin = -std::numeric_limits<double>::infinity();
    rep.exit_margin = std::numeric_limits<double>::infinity();
    for (FacetId f : kAllFacets) {
        if (box.facet_degenerate(f)) {
            rep.degenerate.push_back(f);
            continue;
        }
        if (f == exit) {
            sample_facet(box, f, samples, [&](const Vec3& n) {
                for (int m = 0; m < 8; ++m) rep.exit_margin = std::min(rep.exit_margin, n.dot(c.u[m]));
            });
        } else {
            const auto vs = facet_vertices(f);
            sample_facet(box, f, samples, [&](const Vec3& n) {
                for (int m : vs) rep.worst_margin = std::max(rep.worst_margin, n.dot(c.u[m]));
            });
        }
    }
    const bool exit_ok = !box.facet_degenerate(exit) && rep.exit_margin > 0.0;
    rep.pass = exit_ok && rep.worst_margin < 0.0;
    return rep;
}

CertificateReport verify_invariant(const Partition& p, const RegionIndex& r, const VertexControls& c, int samples) {
    return verify_invariant(p.box(r), c, samples);
}

CertificateReport verify_exit(const Partition& p, const RegionIndex& r, FacetId exit, const VertexControls& c,
                              int samples) {
    return verify_exit(p.box(r), exit, c, samples);
}

CertificateReport verify_label(const RegionBox& box, const VertexControls& c, int samples) {
    if (c.label == ControlLabel::Hold) return verify_invariant(box, c, samples);
    return verify_exit(box, exit_facet(c.label), c, samples);
}

}  // namespace sphform
