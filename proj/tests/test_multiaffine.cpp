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

#include <cmath>
#include <random>

#include "doctest.h"
#include "sphform/multiaffine.hpp"

using namespace sphform;

namespace {

// g(r, theta, phi) = sum over subsets S of {r, theta, phi} of c_S * prod S,
// one independent coefficient set per output component.
struct MultiAffine {
    std::array<Vec3, 8> c;

    Vec3 operator()(const SphericalPoint& s) const {
        Vec3 out = Vec3::Zero();
        for (int m = 0; m < 8; ++m) {
            double w = 1.0;
            if (m & 1) w *= s.r;
            if (m & 2) w *= s.theta;
            if (m & 4) w *= s.phi;
            out += w * c[m];
        }
        return out;
    }
};

double u01(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace

TEST_CASE("interpolation reproduces multi-affine functions") {
    const Partition p({50, 15, 20, 10});
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n(0.0, 1.0);
    const auto regions = p.regions();
    for (int f = 0; f < 5; ++f) {
        MultiAffine g;
        for (Vec3& c : g.c) c = Vec3(n(rng), n(rng), n(rng));
        const RegionIndex r = regions[rng() % regions.size()];
        const RegionBox b = p.box(r);
        VertexField field;
        for (int m = 0; m < 8; ++m) field[m] = g(b.vertex(m));
        for (int k = 0; k < 200; ++k) {
            const SphericalPoint x{b.r_lo + u01(rng) * (b.r_hi - b.r_lo), b.th_lo + u01(rng) * (b.th_hi - b.th_lo),
                                   b.ph_lo + u01(rng) * (b.ph_hi - b.ph_lo)};
            const Vec3 want = g(x);
            const Vec3 got = interpolate(b, field, x, 1e-9);
            CHECK((got - want).norm() <= 1e-10 * std::max(1.0, want.norm()));
        }
    }
}

TEST_CASE("vertex values are reproduced exactly") {
    const Partition p({10, 4, 5, 5});
    const RegionBox b = p.box({2, 3, 2});
    VertexField field;
    for (int m = 0; m < 8; ++m) field[m] = Vec3(m, -m, 2 * m);
    for (int m = 0; m < 8; ++m) {
        const LambdaCoeffs l = lambda_coeffs(b, b.vertex(m), 1e-9);
        for (int q = 0; q < 8; ++q) CHECK(l.lambda[q] == doctest::Approx(q == m ? 1.0 : 0.0));
        CHECK((interpolate(b, field, b.vertex(m), 1e-9) - field[m]).norm() < 1e-12);
    }
}

TEST_CASE("coefficients form a partition of unity") {
    const Partition p({50, 15, 20, 10});
    std::mt19937_64 rng(5);
    const auto regions = p.regions();
    for (int k = 0; k < 2000; ++k) {
        const RegionBox b = p.box(regions[rng() % regions.size()]);
        const SphericalPoint x{b.r_lo + u01(rng) * (b.r_hi - b.r_lo), b.th_lo + u01(rng) * (b.th_hi - b.th_lo),
                               b.ph_lo + u01(rng) * (b.ph_hi - b.ph_lo)};
        const LambdaCoeffs l = lambda_coeffs(b, x, 1e-9);
        double sum = 0.0;
        for (double v : l.lambda) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("points outside the clamp band are rejected") {
    const Partition p({10, 4, 5, 5});
    const RegionBox b = p.box({2, 2, 2});
    const SphericalPoint out{b.r_hi + 0.1, 0.5 * (b.th_lo + b.th_hi), 0.5 * (b.ph_lo + b.ph_hi)};
    CHECK_THROWS_AS(lambda_coeffs(b, out, 1e-3), PointNotInRegion);
    const SphericalPoint near{b.r_hi + 1e-4, out.theta, out.phi};
    const LambdaCoeffs l = lambda_coeffs(b, near, 1e-3);
    CHECK(l.lambda_r == doctest::Approx(1.0));
}

TEST_CASE("theta is unwrapped for the last sector") {
    const Partition p({10, 4, 5, 5});
    const RegionBox b = p.box({2, 4, 2});  // theta in [3pi/2, 2pi]
    const double ph = 0.5 * (b.ph_lo + b.ph_hi);
    const LambdaCoeffs hi = lambda_coeffs(b, {5.0, 0.0, ph}, 1e-9);
    CHECK(hi.lambda_theta == doctest::Approx(1.0));
}

TEST_CASE("facet weights live on the facet vertices") {
    const Partition p({10, 4, 5, 5});
    const RegionBox b = p.box({2, 2, 2});
    for (FacetId f : kAllFacets) {
        const SphericalPoint y = b.facet_point(f, 0.3, 0.6);
        const FacetWeights w = facet_weights(b, f, y, 1e-9);
        CHECK(w.vertex == facet_vertices(f));
        double sum = 0;
        for (double v : w.weight) sum += v;
        CHECK(sum == doctest::Approx(1.0));
        // V(F) is the set of vertices whose bit on the facet axis matches its side.
        for (int m : w.vertex) CHECK(vertex_bit(m, f.axis) == static_cast<int>(f.side));
    }
}
