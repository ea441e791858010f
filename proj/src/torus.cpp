#include "dalab/torus.hpp"

#include <cmath>

namespace dalab {

namespace {

double wrap_unit(double v) {
    double r = v - std::floor(v);
    if (r >= 1.0) r -= 1.0;  // guards v = -1e-17 style roundoff
    if (r < 0.0) r += 1.0;
    return r;
}

}  // namespace

TorusPoint project(const LiftPoint& x) {
    TorusPoint p;
    p.c.resize(x.c.size());
    for (int i = 0; i < x.c.size(); ++i) p.c[i] = wrap_unit(x.c[i]);
    return p;
}

TorusPoint make_torus_point(const VecX& coords) {
    LiftPoint l{coords};
    return project(l);
}

double torus_dist(const TorusPoint& x, const TorusPoint& y) {
    if (x.c.size() != y.c.size())
        throw DimensionError("torus_dist: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < x.c.size(); ++i) {
        double d = std::abs(x.c[i] - y.c[i]);
        if (d > 0.5) d = 1.0 - d;
        s += d * d;
    }
    return std::sqrt(s);
}

LiftPoint nearest_lift(const TorusPoint& x, const LiftPoint& anchor) {
    if (x.c.size() != anchor.c.size())
        throw DimensionError("nearest_lift: dimension mismatch");
    LiftPoint out;
    out.c.resize(x.c.size());
    for (int i = 0; i < x.c.size(); ++i) {
        double base = std::floor(anchor.c[i]) + x.c[i];
        double best = base;
        double bestd = std::abs(base - anchor.c[i]);
        for (int k = -1; k <= 1; ++k) {
            double cand = base + k;
            double d = std::abs(cand - anchor.c[i]);
            // strict improvement, or a tie resolved toward the smaller coordinate
            if (d < bestd - 0.0 || (d == bestd && cand < best)) {
                best = cand;
                bestd = d;
            }
        }
        out.c[i] = best;
    }
    return out;
}

std::int64_t SampleGrid::grid_cardinality() const {
    std::int64_t n = 1;
    for (int r : resolution) {
        if (r < 1) throw Error("SampleGrid: resolution entries must be >= 1");
        n *= r;
    }
    return n;
}

std::vector<TorusPoint> SampleGrid::materialize() const {
    const int d = dim();
    std::vector<TorusPoint> pts;
    pts.reserve(static_cast<std::size_t>(total()));
    std::vector<int> idx(d, 0);
    const std::int64_t n = grid_cardinality();
    for (std::int64_t k = 0; k < n; ++k) {
        TorusPoint p;
        p.c.resize(d);
        for (int i = 0; i < d; ++i) p.c[i] = static_cast<double>(idx[i]) / resolution[i];
        pts.push_back(p);
        // row-major increment: last axis fastest
        for (int i = d - 1; i >= 0; --i) {
            if (++idx[i] < resolution[i]) break;
            idx[i] = 0;
        }
    }
    if (random_count > 0) {
        Rng rng(seed);
        for (int k = 0; k < random_count; ++k) {
            TorusPoint p;
            p.c.resize(d);
            for (int i = 0; i < d; ++i) p.c[i] = rng.uniform();
            pts.push_back(p);
        }
    }
    return pts;
}

}  // namespace dalab
