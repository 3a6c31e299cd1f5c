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

#include "sphform/types.hpp"

#include <algorithm>
#include <cmath>

namespace sphform {

std::string to_string(const RegionIndex& r) {
    return "[" + std::to_string(r.i) + "," + std::to_string(r.j) + "," + std::to_string(r.k) + "]";
}

std::string to_string(FacetId f) {
    static const char* axes[] = {"r", "theta", "phi"};
    return std::string("F_") + axes[static_cast<int>(f.axis)] + (f.side == Side::Plus ? "+" : "-");
}

std::string to_string(ControlLabel l) {
    switch (l) {
        case ControlLabel::Hold: return "C_0";
        case ControlLabel::RPlus: return "C_r+";
        case ControlLabel::RMinus: return "C_r-";
        case ControlLabel::ThetaPlus: return "C_theta+";
        case ControlLabel::ThetaMinus: return "C_theta-";
        case ControlLabel::PhiPlus: return "C_phi+";
        case ControlLabel::PhiMinus: return "C_phi-";
    }
    return "?";
}

ControlLabel exit_label(FacetId f) {
    const bool plus = f.side == Side::Plus;
    switch (f.axis) {
        case Axis::R: return plus ? ControlLabel::RPlus : ControlLabel::RMinus;
        case Axis::Theta: return plus ? ControlLabel::ThetaPlus : ControlLabel::ThetaMinus;
        case Axis::Phi: return plus ? ControlLabel::PhiPlus : ControlLabel::PhiMinus;
    }
    return ControlLabel::Hold;
}

FacetId exit_facet(ControlLabel l) {
    switch (l) {
        case ControlLabel::RPlus: return {Axis::R, Side::Plus};
        case ControlLabel::RMinus: return {Axis::R, Side::Minus};
        case ControlLabel::ThetaPlus: return {Axis::Theta, Side::Plus};
        case ControlLabel::ThetaMinus: return {Axis::Theta, Side::Minus};
        case ControlLabel::PhiPlus: return {Axis::Phi, Side::Plus};
        case ControlLabel::PhiMinus: return {Axis::Phi, Side::Minus};
        case ControlLabel::Hold: break;
    }
    throw Error("C_0 has no exit facet");
}

double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

SphericalPoint to_spherical(const Vec3& p) {
    SphericalPoint s;
    s.r = p.norm();
    if (s.r == 0.0) return s;
    if (p.x() != 0.0 || p.y() != 0.0) s.theta = wrap_angle(std::atan2(p.y(), p.x()));
    s.phi = std::acos(std::clamp(p.z() / s.r, -1.0, 1.0));
    return s;
}

Vec3 to_cartesian(const SphericalPoint& s) { return s.r * unit_r(s.theta, s.phi); }

Vec3 unit_r(double theta, double phi) {
    return {std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta), std::cos(phi)};
}

Vec3 unit_theta(double theta) { return {-std::sin(theta), std::cos(theta), 0.0}; }

Vec3 unit_phi(double theta, double phi) {
    return {std::cos(phi) * std::cos(theta), std::cos(phi) * std::sin(theta), -std::sin(phi)};
}

}  // namespace sphform
