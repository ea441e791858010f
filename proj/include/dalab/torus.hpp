#pragma once

#include <cstdint>
#include <vector>

#include "dalab/common.hpp"

namespace dalab {

// Point on T^d = R^d/Z^d, stored by its fundamental-domain representative in [0,1)^d.
struct TorusPoint {
    VecX c;

    int dim() const { return static_cast<int>(c.size()); }
};

// Point in the universal cover R^d.
struct LiftPoint {
    VecX c;

    int dim() const { return static_cast<int>(c.size()); }
};

// Reduce each coordinate mod 1 into [0,1).
TorusPoint project(const LiftPoint& x);
TorusPoint make_torus_point(const VecX& coords);

// Flat quotient metric: min over deck translations of the Euclidean distance.
double torus_dist(const TorusPoint& x, const TorusPoint& y);

// Lift of x closest to anchor; ties broken toward the smaller coordinate.
LiftPoint nearest_lift(const TorusPoint& x, const LiftPoint& anchor);

// Deterministic point sample on T^d: a row-major regular grid plus an optional
// seeded uniform batch.
struct SampleGrid {
    std::vector<int> resolution;      // per-axis, all >= 1
    int random_count = 0;
    std::uint64_t seed = 0;

    int dim() const { return static_cast<int>(resolution.size()); }
    std::int64_t grid_cardinality() const;
    std::int64_t total() const { return grid_cardinality() + random_count; }

    std::vector<TorusPoint> materialize() const;
};

}  // namespace dalab
