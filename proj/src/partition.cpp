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

#include "sphform/partition.hpp"

#include <algorithm>
#include <cmath>

namespace sphform {

namespace {

constexpr double kAngleEps = 1e-12;

bool on_axis_angle(double phi) { return std::abs(std::sin(phi)) < kAngleEps; }

// Metric distance from a point to a half-plane/cone at angular offset delta,
// given the lever arm (rho for theta, r for phi).
double angular_distance(double arm, double delta) {
    delta = std::abs(delta);
    return delta >= kPi / 2 ? arm : arm * std::sin(delta);
}

double chord(double angle) { return 2.0 * std::sin(std::min(angle, kPi) / 2.0); }

int floor_index(double value, double step, int count) {
    int idx = static_cast<int>(std::floor(value / step)) + 1;
    return std::clamp(idx, 1, count);
}

}  // namespace

void PartitionSpec::validate() const {
    if (!(radius_m > 0.0) || !std::isfinite(radius_m)) throw InvalidSpec("partition.radius_m must be positive");
    if (n_r < 2) throw InvalidSpec("partition.n_r must be >= 2");
    if (n_theta < 2) throw InvalidSpec("partition.n_theta must be >= 2");
    if (n_phi < 2) throw InvalidSpec("partition.n_phi must be >= 2");
}

double RegionBox::lo(Axis a) const {
    switch (a) {
        case Axis::R: return r_lo;
        case Axis::Theta: return th_lo;
        case Axis::Phi: return ph_lo;
    }
    return 0;
}

double RegionBox::hi(Axis a) const {
    switch (a) {
        case Axis::R: return r_hi;
        case Axis::Theta: return th_hi;
        case Axis::Phi: return ph_hi;
    }
    return 0;
}

SphericalPoint RegionBox::vertex(int m) const {
    return {vertex_bit(m, Axis::R) ? r_hi : r_lo, vertex_bit(m, Axis::Theta) ? th_hi : th_lo,
            vertex_bit(m, Axis::Phi) ? ph_hi : ph_lo};
}

SphericalPoint RegionBox::centroid() const {
    return {(r_lo + r_hi) / 2, (th_lo + th_hi) / 2, (ph_lo + ph_hi) / 2};
}

bool RegionBox::facet_degenerate(FacetId f) const {
    switch (f.axis) {
        case Axis::R: return (f.side == Side::Plus ? r_hi : r_lo) <= 0.0;
        case Axis::Theta: return r_hi <= 0.0;
        case Axis::Phi: return on_axis_angle(f.side == Side::Plus ? ph_hi : ph_lo);
    }
    return false;
}

bool RegionBox::vertex_at_origin(int m) const { return vertex(m).r <= 0.0; }

bool RegionBox::vertex_on_axis(int m) const {
    const SphericalPoint v = vertex(m);
    return v.r > 0.0 && on_axis_angle(v.phi);
}

double RegionBox::facet_value(FacetId f) const { return f.side == Side::Plus ? hi(f.axis) : lo(f.axis); }

SphericalPoint RegionBox::facet_point(FacetId f, double a, double b) const {
    auto lerp = [](double lo, double hi, double t) { return lo + (hi - lo) * t; };
    const double v = facet_value(f);
    switch (f.axis) {
        case Axis::R: return {v, lerp(th_lo, th_hi, a), lerp(ph_lo, ph_hi, b)};
        case Axis::Theta: return {lerp(r_lo, r_hi, a), v, lerp(ph_lo, ph_hi, b)};
        case Axis::Phi: return {lerp(r_lo, r_hi, a), lerp(th_lo, th_hi, b), v};
    }
    return {};
}

std::string to_string(const PartitionCell& c) {
    switch (c.kind) {
        case PartitionCell::Kind::Region: return "R" + to_string(c.a);
        case PartitionCell::Kind::Detection: return "d(" + to_string(c.a) + "," + to_string(c.b) + ")";
        case PartitionCell::Kind::EdgeSet: return "E";
        case PartitionCell::Kind::Surface: return "S";
    }
    return "?";
}

Partition::Partition(PartitionSpec spec) : spec_(spec) { spec_.validate(); }

double Partition::r_curve(int i) const { return spec_.radius_m * (i - 1) / (spec_.n_r - 1); }
double Partition::theta_curve(int j) const { return kTwoPi * (j - 1) / (spec_.n_theta - 1); }
double Partition::phi_curve(int k) const { return kPi * (k - 1) / (spec_.n_phi - 1); }

bool Partition::valid(const RegionIndex& r) const {
    return r.i >= 1 && r.i <= spec_.n_r - 1 && r.j >= 1 && r.j <= spec_.n_theta - 1 && r.k >= 1 &&
           r.k <= spec_.n_phi - 1;
}

void Partition::require_valid(const RegionIndex& r) const {
    if (!valid(r)) throw InvalidRegion("invalid region " + to_string(r));
}

std::size_t Partition::region_count() const {
    return static_cast<std::size_t>(spec_.n_r - 1) * (spec_.n_theta - 1) * (spec_.n_phi - 1);
}

std::vector<RegionIndex> Partition::regions() const {
    std::vector<RegionIndex> out;
    out.reserve(region_count());
    for (int i = 1; i < spec_.n_r; ++i)
        for (int j = 1; j < spec_.n_theta; ++j)
            for (int k = 1; k < spec_.n_phi; ++k) out.push_back({i, j, k});
    return out;
}

RegionBox Partition::box(const RegionIndex& r) const {
    require_valid(r);
    return {r_curve(r.i), r_curve(r.i + 1), theta_curve(r.j), theta_curve(r.j + 1),
            phi_curve(r.k), phi_curve(r.k + 1)};
}

std::array<SphericalPoint, 8> Partition::vertices(const RegionIndex& r) const {
    const RegionBox b = box(r);
    std::array<SphericalPoint, 8> out;
    for (int m = 0; m < 8; ++m) out[m] = b.vertex(m);
    return out;
}

PartitionCell Partition::classify(const Vec3& p, double tol) const {
    const double tabs = tol * spec_.radius_m;
    const double r = p.norm();
    if (r > spec_.radius_m + tabs) throw PointOutsideHorizon("point at radius " + std::to_string(r) + " outside horizon");
    const SphericalPoint s = to_spherical(p);
    const double rho = r * std::sin(s.phi);

    const int ir = static_cast<int>(std::lround(r / dr()));
    const bool near_r = std::abs(r - ir * dr()) <= tabs;
    const int it = static_cast<int>(std::lround(s.theta / dtheta()));
    const bool near_t = angular_distance(rho, s.theta - it * dtheta()) <= tabs;
    const int ip = static_cast<int>(std::lround(s.phi / dphi()));
    const bool near_p = angular_distance(r, s.phi - ip * dphi()) <= tabs;

    const int near_count = int(near_r) + int(near_t) + int(near_p);
    PartitionCell cell;
    if (near_r && ir >= spec_.n_r - 1) {
        cell.kind = near_count > 1 ? PartitionCell::Kind::EdgeSet : PartitionCell::Kind::Surface;
        return cell;
    }
    if (near_count >= 2) {
        cell.kind = PartitionCell::Kind::EdgeSet;
        return cell;
    }

    RegionIndex a{floor_index(r, dr(), spec_.n_r - 1), floor_index(s.theta, dtheta(), spec_.n_theta - 1),
                  floor_index(s.phi, dphi(), spec_.n_phi - 1)};
    if (near_count == 0) {
        cell.kind = PartitionCell::Kind::Region;
        cell.a = a;
        return cell;
    }

    RegionIndex b = a;
    if (near_r) {
        a.i = ir;
        b.i = ir + 1;
    } else if (near_t) {
        const int sectors = spec_.n_theta - 1;
        const int c = ((it % sectors) + sectors) % sectors;  // curve index, 0-based
        a.j = c == 0 ? sectors : c;
        b.j = c + 1;
    } else {
        a.k = ip;
        b.k = ip + 1;
    }
    cell.kind = PartitionCell::Kind::Detection;
    cell.a = std::min(a, b);
    cell.b = std::max(a, b);
    return cell;
}

RegionIndex Partition::region_of(const Vec3& p) const {
    const SphericalPoint s = to_spherical(p);
    return {floor_index(s.r, dr(), spec_.n_r - 1), floor_index(s.theta, dtheta(), spec_.n_theta - 1),
            floor_index(s.phi, dphi(), spec_.n_phi - 1)};
}

std::optional<RegionIndex> Partition::adjacent(const RegionIndex& r, FacetId f) const {
    require_valid(r);
    RegionIndex n = r;
    const bool plus = f.side == Side::Plus;
    switch (f.axis) {
        case Axis::R:
            n.i += plus ? 1 : -1;
            break;
        case Axis::Theta:
            if (plus)
                n.j = r.j == spec_.n_theta - 1 ? 1 : r.j + 1;
            else
                n.j = r.j == 1 ? spec_.n_theta - 1 : r.j - 1;
            return n;
        case Axis::Phi:
            n.k += plus ? 1 : -1;
            break;
    }
    if (!valid(n)) return std::nullopt;
    return n;
}

std::optional<FacetId> Partition::shared_facet(const RegionIndex& a, const RegionIndex& b) const {
    for (FacetId f : kAllFacets) {
        auto n = adjacent(a, f);
        if (n && *n == b) return f;
    }
    return std::nullopt;
}

Vec3 facet_normal(FacetId f, double theta, double phi) {
    const double s = f.side == Side::Plus ? 1.0 : -1.0;
    switch (f.axis) {
        case Axis::R: return s * unit_r(theta, phi);
        case Axis::Theta: return s * unit_theta(theta);
        case Axis::Phi: return s * unit_phi(theta, phi);
    }
    return Vec3::Zero();
}

Vec3 Partition::outer_normal(const RegionIndex& r, FacetId f, const SphericalPoint& y) const {
    const RegionBox b = box(r);
    if (b.facet_degenerate(f)) throw DegenerateFacet(to_string(f) + " of " + to_string(r) + " has zero area");
    const double tabs = kDefaultTolerance * spec_.radius_m;
    const double fixed = b.facet_value(f);
    double off = 0.0;
    switch (f.axis) {
        case Axis::R: off = std::abs(y.r - fixed); break;
        case Axis::Theta: {
            double d = std::remainder(y.theta - fixed, kTwoPi);
            off = angular_distance(y.r * std::sin(y.phi), d);
            break;
        }
        case Axis::Phi: off = angular_distance(y.r, y.phi - fixed); break;
    }
    if (off > tabs) throw PointNotOnFacet("point not on " + to_string(f) + " of " + to_string(r));
    return facet_normal(f, f.axis == Axis::Theta ? fixed : y.theta, f.axis == Axis::Phi ? fixed : y.phi);
}

double Partition::min_cell_thickness() const {
    const double r2 = r_curve(2);
    return std::min({dr(), r2 * chord(dphi()), r2 * std::sin(std::min(dphi(), kPi / 2)) * chord(dtheta())});
}

}  // namespace sphform
