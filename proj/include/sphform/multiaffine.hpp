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

#include "sphform/partition.hpp"

namespace sphform {

struct LambdaCoeffs {
    std::array<double, 8> lambda{};
    double lambda_r = 0, lambda_theta = 0, lambda_phi = 0;
};

using VertexField = std::array<Vec3, 8>;

// clamp_tol is an absolute metric distance: points farther than this outside
// the box raise PointNotInRegion, closer ones are clamped onto it.
LambdaCoeffs lambda_coeffs(const RegionBox& box, const SphericalPoint& x, double clamp_tol);
LambdaCoeffs lambda_coeffs(const Partition& p, const RegionIndex& region, const SphericalPoint& x);

Vec3 interpolate(const RegionBox& box, const VertexField& field, const SphericalPoint& x, double clamp_tol);
Vec3 interpolate(const Partition& p, const RegionIndex& region, const VertexField& field, const SphericalPoint& x);

struct FacetWeights {
    std::array<int, 4> vertex{};
    std::array<double, 4> weight{};
};

// Logical vertices V(F), ascending.
std::array<int, 4> facet_vertices(FacetId f);

FacetWeights facet_weights(const RegionBox& box, FacetId f, const SphericalPoint& y, double tol);
FacetWeights facet_weights(const Partition& p, const RegionIndex& region, FacetId f, const SphericalPoint& y);

}  // namespace sphform
