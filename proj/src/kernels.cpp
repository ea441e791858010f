#include "dalab/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dalab/maps.hpp"

namespace dalab {

void set_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

int effective_threads(int requested) {
#ifdef _OPENMP
    if (requested > 0) return requested;
    return omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

namespace {

inline void orbit_row(const TorusMap& f, const TorusPoint& p, int n, int d, double* out) {
    TorusPoint cur = p;
    for (int step = 0; step < n; ++step) {
        for (int k = 0; k < d; ++k) out[step * d + k] = cur.c[k];
        if (step + 1 < n) cur = f.apply(cur);
    }
}

}  // namespace

OrbitTable orbit_table_serial(const TorusMap& f, const std::vector<TorusPoint>& pts, int n) {
    OrbitTable tab;
    tab.d = f.dim();
    tab.n = n;
    tab.count = static_cast<std::int64_t>(pts.size());
    tab.data.resize(static_cast<std::size_t>(tab.count) * n * tab.d);
    for (std::int64_t i = 0; i < tab.count; ++i)
        orbit_row(f, pts[static_cast<std::size_t>(i)], n, tab.d, tab.data.data() + i * n * tab.d);
    return tab;
}

OrbitTable orbit_table(const TorusMap& f, const std::vector<TorusPoint>& pts, int n, int threads) {
    OrbitTable tab;
    tab.d = f.dim();
    tab.n = n;
    tab.count = static_cast<std::int64_t>(pts.size());
    tab.data.resize(static_cast<std::size_t>(tab.count) * n * tab.d);
    set_threads(threads);
    const int d = tab.d;
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < tab.count; ++i)
        orbit_row(f, pts[static_cast<std::size_t>(i)], n, d, tab.data.data() + i * n * d);
    return tab;
}

double dynamical_dist_exceeds(const OrbitTable& tab, std::int64_t i, std::int64_t j,
                              int n_use, double eps, bool* exceeds) {
    const int d = tab.d;
    double maxd = 0.0;
    *exceeds = false;
    if (n_use > tab.n) n_use = tab.n;
    for (int step = 0; step < n_use; ++step) {
        const double* a = tab.row(i, step);
        const double* b = tab.row(j, step);
        double s = 0.0;
        for (int k = 0; k < d; ++k) {
            double dd = std::abs(a[k] - b[k]);
            if (dd > 0.5) dd = 1.0 - dd;
            s += dd * dd;
        }
        double dist = std::sqrt(s);
        if (dist > maxd) maxd = dist;
        if (maxd > eps) {
            *exceeds = true;
            return maxd;
        }
    }
    return maxd;
}

}  // namespace dalab
