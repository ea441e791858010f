#pragma once

#include <cstdint>
#include <vector>

#include "dalab/common.hpp"
#include "dalab/torus.hpp"

namespace dalab {

class TorusMap;

/** Forward-orbit table of a point sample.
 *
 *  Row layout: orbit(i, step) occupies entries [ (i*n + step)*d , ... +d ),
 *  step = 0 stores the sample point itself. All orbits live on the torus
 *  (coordinates wrapped into [0,1)).
 *
 *  The OpenMP kernel and the serial reference compute identical values; the
 *  serial path is kept for testing and benchmarking.
 */
struct OrbitTable {
    int d = 0;
    int n = 0;
    std::int64_t count = 0;
    std::vector<double> data;

    const double* row(std::int64_t i, int step) const {
        return data.data() + (i * n + step) * d;
    }
};

OrbitTable orbit_table(const TorusMap& f, const std::vector<TorusPoint>& pts, int n,
                       int threads = 0);
OrbitTable orbit_table_serial(const TorusMap& f, const std::vector<TorusPoint>& pts, int n);

// max_{0<=i<n_use} torus_dist(f^i x, f^i y) evaluated on cached orbits, with
// early exit as soon as the running max exceeds eps (the use sites only test
// against a threshold).
double dynamical_dist_exceeds(const OrbitTable& tab, std::int64_t i, std::int64_t j,
                              int n_use, double eps, bool* exceeds);

// Set the OpenMP thread count for subsequent kernels; 0 keeps the runtime default.
void set_threads(int threads);
int effective_threads(int requested);

}  // namespace dalab
