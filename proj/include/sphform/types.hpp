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

#include <Eigen/Dense>

#include <array>
#include <compare>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sphform {

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct RegionIndex {
    int i = 1;
    int j = 1;
    int k = 1;

    friend auto operator<=>(const RegionIndex&, const RegionIndex&) = default;
};

std::string to_string(const RegionIndex& r);  // "[i,j,k]"

enum class Axis : std::uint8_t { R = 0, Theta = 1, Phi = 2 };
enum class Side : std::uint8_t { Minus = 0, Plus = 1 };

struct FacetId {
    Axis axis = Axis::R;
    Side side = Side::Minus;

    friend auto operator<=>(const FacetId&, const FacetId&) = default;
};

inline constexpr std::array<FacetId, 6> kAllFacets = {{
    {Axis::R, Side::Plus},      {Axis::R, Side::Minus},
    {Axis::Theta, Side::Plus},  {Axis::Theta, Side::Minus},
    {Axis::Phi, Side::Plus},    {Axis::Phi, Side::Minus},
}};

inline FacetId opposite(FacetId f) {
    return {f.axis, f.side == Side::Plus ? Side::Minus : Side::Plus};
}

std::string to_string(FacetId f);  // "F_r+", "F_theta-", ...

// Bit of vertex index m on an axis: bit0 = r, bit1 = theta, bit2 = phi.
constexpr int vertex_bit(int m, Axis a) { return (m >> static_cast<int>(a)) & 1; }

enum class ControlLabel : std::uint8_t { Hold, RPlus, RMinus, ThetaPlus, ThetaMinus, PhiPlus, PhiMinus };

inline constexpr std::array<ControlLabel, 7> kAllLabels = {
    ControlLabel::Hold,      ControlLabel::RPlus,   ControlLabel::RMinus, ControlLabel::ThetaPlus,
    ControlLabel::ThetaMinus, ControlLabel::PhiPlus, ControlLabel::PhiMinus};

std::string to_string(ControlLabel l);  // "C_0", "C_r+", "C_theta-", ...
ControlLabel exit_label(FacetId f);
FacetId exit_facet(ControlLabel l);  // throws for Hold

struct SphericalPoint {
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

SphericalPoint to_spherical(const Vec3& p);
Vec3 to_cartesian(const SphericalPoint& s);

// Local spherical unit frame.
Vec3 unit_r(double theta, double phi);
Vec3 unit_theta(double theta);
Vec3 unit_phi(double theta, double phi);

// theta normalized into [0, 2pi).
double wrap_angle(double theta);

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

#define SPHFORM_DEFINE_ERROR(Name)                 \
    class Name : public Error {                    \
      public:                                      \
        using Error::Error;                        \
    }

SPHFORM_DEFINE_ERROR(PointOutsideHorizon);
SPHFORM_DEFINE_ERROR(InvalidRegion);
SPHFORM_DEFINE_ERROR(DegenerateFacet);
SPHFORM_DEFINE_ERROR(PointNotInRegion);
SPHFORM_DEFINE_ERROR(PointNotOnFacet);
SPHFORM_DEFINE_ERROR(InvalidSpec);

}  // namespace sphform
