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

#include "sphform/types.hpp"

#include <optional>
#include <vector>

namespace sphform {

inline constexpr double kDefaultTolerance = 1e-9;

struct PartitionSpec {
    double radius_m = 1.0;
    int n_r = 2;
    int n_theta = 2;
    int n_phi = 2;

    void validate() const;  // throws InvalidSpec
    friend bool operator==(const PartitionSpec&, const PartitionSpec&) = default;
};

// Closed coordinate box of a region. th_hi may equal 2pi; on the wrap the
// box is [th_lo, th_hi] with th_lo < th_hi always.
struct RegionBox {
    double r_lo = 0, r_hi = 0;
    double th_lo = 0, th_hi = 0;
    double ph_lo = 0, ph_hi = 0;

    double lo(Axis a) const;
    double hi(Axis a) const;
    SphericalPoint vertex(int m) const;
    SphericalPoint centroid() const;
    // Zero-area facets: r = 0 shell, phi cones collapsed onto the z-axis.
    bool facet_degenerate(FacetId f) const;
    // Geometric position of logical vertex m is the origin / on the z-axis.
    bool vertex_at_origin(int m) const;
    bool vertex_on_axis(int m) const;
    // Facet coordinate value (the fixed coordinate of the facet).
    double facet_value(FacetId f) const;
    // Point on the facet from two parameters in [0,1] (the free coordinates
    // in axis order).
    SphericalPoint facet_point(FacetId f, double a, double b) const;
};

struct PartitionCell {
    enum class Kind { Region, Detection, EdgeSet, Surface };
    Kind kind = Kind::EdgeSet;
    RegionIndex a{};  // Region, or first of a Detection pair (a < b)
    RegionIndex b{};

    friend bool operator==(const PartitionCell&, const PartitionCell&) = default;
};

std::string to_string(const PartitionCell& c);

class Partition {
  public:
    explicit Partition(PartitionSpec spec);

    const PartitionSpec& spec() const { return spec_; }
    double r_curve(int i) const;
    double theta_curve(int j) const;
    double phi_curve(int k) const;
    double dr() const { return spec_.radius_m / (spec_.n_r - 1); }
    double dtheta() const { return kTwoPi / (spec_.n_theta - 1); }
    double dphi() const { return kPi / (spec_.n_phi - 1); }

    bool valid(const RegionIndex& r) const;
    void require_valid(const RegionIndex& r) const;  // throws InvalidRegion
    std::size_t region_count() const;
    std::vector<RegionIndex> regions() const;  // lexicographic (i, j, k)

    RegionBox box(const RegionIndex& r) const;
    std::array<SphericalPoint, 8> vertices(const RegionIndex& r) const;
    SphericalPoint centroid(const RegionIndex& r) const { return box(r).centroid(); }

    // tol is relative to radius_m.
    PartitionCell classify(const Vec3& p, double tol = kDefaultTolerance) const;
    // Floor-based region lookup without tolerance bands; every point of the
    // closed ball maps to some region.
    RegionIndex region_of(const Vec3& p) const;

    std::optional<RegionIndex> adjacent(const RegionIndex& r, FacetId f) const;
    // Facet shared by two adjacent regions, seen from a.
    std::optional<FacetId> shared_facet(const RegionIndex& a, const RegionIndex& b) const;
    bool is_adjacent(const RegionIndex& a, const RegionIndex& b) const {
        return shared_facet(a, b).has_value();
    }

    Vec3 outer_normal(const RegionIndex& r, FacetId f, const SphericalPoint& y) const;

    // Thinnest cell dimension, used to validate integration steps.
    double min_cell_thickness() const;

  private:
    PartitionSpec spec_;
};

// Signed outer normal of a facet at spherical angles (theta, phi).
Vec3 facet_normal(FacetId f, double theta, double phi);

}  // namespace sphform
