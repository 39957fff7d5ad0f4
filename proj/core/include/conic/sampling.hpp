#pragma once

#include <random>

#include "conic/cone.hpp"

namespace conic {

/// Strictly interior point of the cone (Side::Primal) or of its dual, with
/// log-normal magnitudes so that points both near and far from the boundary
/// occur.
Vector random_interior(const ConeSpec& cone, Side side, std::mt19937_64& rng);

/// Random exponent vector on the simplex with entries ≥ 1e-3 before
/// normalization.
std::vector<double> random_simplex(int n, std::mt19937_64& rng);

/// Random cone of the given kind with total dimension ≤ max_dim.
ConeSpec random_cone(ConeKind kind, int max_dim, std::mt19937_64& rng);

}  // namespace conic
