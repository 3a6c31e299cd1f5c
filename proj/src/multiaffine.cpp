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

#include "sphform/multiaffine.hpp"

#include <algorithm>
#include <cmath>

namespace sphform {

namespace {

double interval_gap(double v, double lo, double hi) {
    if (v < lo) return lo - v;
    if (v > hi) return v - hi;
    return 0.0;
}

double arc_excess(double arm, double gap) { return gap >= kPi / 2 ? arm : arm * std::sin(gap); }

// Shift theta by a multiple of 2pi to land closest to [lo, hi].
double unwrap_into(double theta, double lo, double hi) {
    double best = theta, best_gap = interval_gap(theta, lo, hi);
    for (double shift : {kTwoPi, -kTwoPi}) {
        const double g = interval_gap(theta + shift, lo, hi);
        if (g < best_gap) {
            best_gap = g;
            best = theta + shift;
        }
    }
    return best;
}

[[noreturn]] void outside(const char* axis, double excess) {
    throw PointNotInRegion(std::string("point outside region box along ") + axis + " by " + std::to_string(excess) +
                           " m");
}

}  // namespace

LambdaCoeffs lambda_coeffs(const RegionBox& box, const SphericalPoint& x, double clamp_tol) {
    const double r_gap = interval_gap(x.r, box.r_lo, box.r_hi);
    if (r_gap > clamp_tol) outside("r", r_gap);
    const double r = std::clamp(x.r, box.r_lo, box.r_hi);

    // On the z-axis and at the origin the angles carry no information.
    const double theta_arm = x.r * std::abs(std::sin(x.phi));
    double theta = unwrap_into(x.theta, box.th_lo, box.th_hi);
    if (theta_arm > clamp_tol) {
        const double e = arc_excess(theta_arm, interval_gap(theta, box.th_lo, box.th_hi));
        if (e > clamp_tol) outside("theta", e);
    }
    theta = std::clamp(theta, box.th_lo, box.th_hi);

    double phi = x.phi;
    if (x.r > clamp_tol) {
        const double e = arc_excess(x.r, interval_gap(phi, box.ph_lo, box.ph_hi));
        if (e > clamp_tol) outside("phi", e);
    }
    phi = std::clamp(phi, box.ph_lo, box.ph_hi);

    LambdaCoeffs c;
    c.lambda_r = (r - box.r_lo) / (box.r_hi - box.r_lo);
    c.lambda_theta = (theta - box.th_lo) / (box.th_hi - box.th_lo);
    c.lambda_phi = (phi - box.ph_lo) / (box.ph_hi - box.ph_lo);
    const double axis_l[3] = {c.lambda_r, c.lambda_theta, c.lambda_phi};
    for (int m = 0; m < 8; ++m) {
        double w = 1.0;
        for (int a = 0; a < 3; ++a) w *= ((m >> a) & 1) ? axis_l[a] : 1.0 - axis_l[a];
        c.lambda[m] = w;
    }
    return c;
}

LambdaCoeffs lambda_coeffs(const Partition& p, const RegionIndex& region, const SphericalPoint& x) {
    return lambda_coeffs(p.box(region), x, kDefaultTolerance * p.spec().radius_m);
}

Vec3 interpolate(const RegionBox& box, const VertexField& field, const SphericalPoint& x, double clamp_tol) {
    const LambdaCoeffs c = lambda_coeffs(box, x, clamp_tol);
    Vec3 out = Vec3::Zero();
    for (int m = 0; m < 8; ++m) out += c.lambda[m] * field[m];
    return out;
}

Vec3 interpolate(const Partition& p, const RegionIndex& region, const VertexField& field, const SphericalPoint& x) {
    return interpolate(p.box(region), field, x, kDefaultTolerance * p.spec().radius_m);
}

std::array<int, 4> facet_vertices(FacetId f) {
    std::array<int, 4> out{};
    int n = 0;
    for (int m = 0; m < 8; ++m)
        if (vertex_bit(m, f.axis) == static_cast<int>(f.side)) out[n++] = m;
    return out;
}

FacetWeights facet_weights(const RegionBox& box, FacetId f, const SphericalPoint& y, double tol) {
    const double fixed = box.facet_value(f);
    double off = 0.0;
    switch (f.axis) {
        case Axis::R: off = std::abs(y.r - fixed); break;
        case Axis::Theta:
            off = arc_excess(y.r * std::abs(std::sin(y.phi)), std::abs(std::remainder(y.theta - fixed, kTwoPi)));
            break;
        case Axis::Phi: off = arc_excess(y.r, std::abs(y.phi - fixed)); break;
    }
    if (off > tol) throw PointNotOnFacet("point is " + std::to_string(off) + " m off " + to_string(f));

    // Pin the facet coordinate so the weights live exactly on V(F).
    SphericalPoint pinned = y;
    switch (f.axis) {
        case Axis::R: pinned.r = fixed; break;
        case Axis::Theta: pinned.theta = fixed; break;
        case Axis::Phi: pinned.phi = fixed; break;
    }
    const LambdaCoeffs c = lambda_coeffs(box, pinned, tol);
    FacetWeights w;
    w.vertex = facet_vertices(f);
    for (int n = 0; n < 4; ++n) w.weight[n] = c.lambda[w.vertex[n]];
    return w;
}

FacetWeights facet_weights(const Partition& p, const RegionIndex& region, FacetId f, const SphericalPoint& y) {
    return facet_weights(p.box(region), f, y, kDefaultTolerance * p.spec().radius_m);
}

}  // namespace sphform
