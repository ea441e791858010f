#include "dalab/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "dalab/cones.hpp"
#include "dalab/linear.hpp"

namespace dalab {

namespace {

// Torus-aware spatial hash on the step-0 positions. Cell width >= eps, so two
// points in non-adjacent cells are strictly more than eps apart at step 0 and
// hence (n,eps)-separated; only neighbor cells need the full orbit check.
class CellGrid {
public:
    CellGrid(const OrbitTable& tab, double eps) : tab_(tab), d_(tab.d) {
        int cap = d_ <= 2 ? 1024 : (d_ == 3 ? 96 : 28);
        cells_ = std::max(1, std::min(cap, static_cast<int>(std::floor(1.0 / eps))));
        std::int64_t total = 1;
        for (int i = 0; i < d_; ++i) total *= cells_;
        head_.assign(total, -1);
        next_.assign(tab.count, -1);
    }

    std::int64_t cell_of(std::int64_t i) const {
        const double* p = tab_.row(i, 0);
        std::int64_t id = 0;
        for (int k = 0; k < d_; ++k) {
            int c = static_cast<int>(p[k] * cells_);
            if (c >= cells_) c = cells_ - 1;
            id = id * cells_ + c;
        }
        return id;
    }

    void insert(std::int64_t i) {
        std::int64_t c = cell_of(i);
        next_[i] = head_[c];
        head_[c] = i;
    }

    // visit selected points in the 3^d neighborhood of i's cell
    template <typename Fn>
    bool for_neighbors(std::int64_t i, Fn&& fn) const {
        const double* p = tab_.row(i, 0);
        int base[kMaxDim];
        for (int k = 0; k < d_; ++k) {
            int c = static_cast<int>(p[k] * cells_);
            if (c >= cells_) c = cells_ - 1;
            base[k] = c;
        }
        int span = cells_ >= 3 ? 3 : cells_;  // avoid visiting a cell twice on tiny grids
        int total = 1;
        for (int k = 0; k < d_; ++k) total *= span;
        for (int m = 0; m < total; ++m) {
            std::int64_t id = 0;
            int mm = m;
            for (int k = 0; k < d_; ++k) {
                int off = mm % span - (span == 3 ? 1 : 0);
                mm /= span;
                int c = base[k] + off;
                if (c < 0) c += cells_;
                if (c >= cells_) c -= cells_;
                id = id * cells_ + c;
            }
            for (std::int64_t j = head_[id]; j >= 0; j = next_[j])
                if (!fn(j)) return false;
        }
        return true;
    }

private:
    const OrbitTable& tab_;
    int d_;
    int cells_;
    std::vector<std::int64_t> head_;
    std::vector<std::int64_t> next_;
};

}  // namespace

SeparatedSet separated_count_seeded(const OrbitTable& tab, int n, double eps,
                                    const std::vector<std::int64_t>& seed) {
    SeparatedSet out;
    CellGrid grid(tab, eps);
    std::vector<std::uint8_t> in_set(tab.count, 0);
    for (std::int64_t s : seed) {
        grid.insert(s);
        in_set[s] = 1;
        out.selected.push_back(s);
    }
    for (std::int64_t i = 0; i < tab.count; ++i) {
        if (in_set[i]) continue;
        bool separated_from_all = grid.for_neighbors(i, [&](std::int64_t j) {
            bool exceeds;
            dynamical_dist_exceeds(tab, i, j, n, eps, &exceeds);
            return exceeds;  // stop as soon as some selected point is too close
        });
        if (separated_from_all) {
            grid.insert(i);
            in_set[i] = 1;
            out.selected.push_back(i);
        }
    }
    out.count = static_cast<std::int64_t>(out.selected.size());
    return out;
}

SeparatedSet separated_count(const TorusMap& f, const std::vector<TorusPoint>& K, int n,
                             double eps, int threads) {
    if (K.empty()) throw Error("separated_count: empty sample");
    if (n < 1 || eps <= 0.0) throw Error("separated_count: need n >= 1 and eps > 0");
    OrbitTable tab = orbit_table(f, K, n, threads);
    return separated_count_seeded(tab, n, eps, {});
}

std::int64_t spanning_count(const TorusMap& f, const std::vector<TorusPoint>& K, int n,
                            double eps, int threads) {
    if (K.empty()) throw Error("spanning_count: empty sample");
    if (n < 1 || eps <= 0.0) throw Error("spanning_count: need n >= 1 and eps > 0");
    OrbitTable tab = orbit_table(f, K, n, threads);
    // first-uncovered greedy with closed balls: identical selection rule
    return separated_count_seeded(tab, n, eps, {}).count;
}

SeparatedSet separated_count_bruteforce(const TorusMap& f, const std::vector<TorusPoint>& K,
                                        int n, double eps) {
    if (K.empty()) throw Error("separated_count_bruteforce: empty sample");
    OrbitTable tab = orbit_table_serial(f, K, n);
    SeparatedSet out;
    for (std::int64_t i = 0; i < tab.count; ++i) {
        bool ok = true;
        for (std::int64_t j : out.selected) {
            bool exceeds;
            dynamical_dist_exceeds(tab, i, j, n, eps, &exceeds);
            if (!exceeds) {
                ok = false;
                break;
            }
        }
        if (ok) out.selected.push_back(i);
    }
    out.count = static_cast<std::int64_t>(out.selected.size());
    return out;
}

std::vector<EpsRate> fit_rates(const BowenCountTable& table, double saturation_fraction) {
    (void)saturation_fraction;  // rows carry their flag already
    std::vector<double> eps_seen;
    for (const auto& r : table.rows)
        if (std::find(eps_seen.begin(), eps_seen.end(), r.eps) == eps_seen.end())
            eps_seen.push_back(r.eps);

    std::vector<EpsRate> rates;
    for (double eps : eps_seen) {
        std::vector<const BowenRow*> usable;
        for (const auto& r : table.rows)
            if (r.eps == eps && !r.flagged && r.separated >= 1) usable.push_back(&r);
        std::sort(usable.begin(), usable.end(),
                  [](const BowenRow* a, const BowenRow* b) { return a->n < b->n; });
        EpsRate er;
        er.eps = eps;
        er.usable_rows = static_cast<int>(usable.size());
        if (usable.size() >= 2) {
            std::size_t w = (usable.size() + 1) / 2;
            if (w < 2) w = 2;
            std::size_t start = usable.size() - w;
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t i = start; i < usable.size(); ++i) {
                double x = usable[i]->n;
                double y = std::log(static_cast<double>(usable[i]->separated));
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
            }
            double m = static_cast<double>(w);
            double denom = m * sxx - sx * sx;
            er.window = static_cast<int>(w);
            er.rate = denom > 0 ? std::max(0.0, (m * sxy - sx * sy) / denom) : 0.0;
        }
        rates.push_back(er);
    }
    return rates;
}

EntropyEstimate estimate_entropy(const TorusMap& f, const std::vector<TorusPoint>& sample,
                                 const std::vector<int>& n_range,
                                 const std::vector<double>& eps_list,
                                 const EstimateOptions& opt) {
    if (sample.empty()) throw Error("estimate_entropy: empty sample");
    if (n_range.empty() || eps_list.empty())
        throw Error("estimate_entropy: empty n range or eps list");
    for (std::size_t i = 1; i < n_range.size(); ++i)
        if (n_range[i] <= n_range[i - 1]) throw Error("estimate_entropy: n range must ascend");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (eps_list[i] >= eps_list[i - 1])
            throw Error("estimate_entropy: eps list must descend");

    int n_max = n_range.back();
    OrbitTable tab = orbit_table(f, sample, n_max, opt.threads);
    const auto saturation =
        static_cast<std::int64_t>(opt.saturation_fraction * static_cast<double>(sample.size()));

    EntropyEstimate est;
    for (double eps : eps_list) {
        std::vector<std::int64_t> seed;
        for (int n : n_range) {
            SeparatedSet s = separated_count_seeded(tab, n, eps, seed);
            seed = s.selected;
            BowenRow row;
            row.n = n;
            row.eps = eps;
            row.separated = s.count;
            row.spanning = s.count;  // a maximal separated set spans the sample
            row.sample_size = static_cast<std::int64_t>(sample.size());
            row.flagged = s.count > saturation;
            est.table.rows.push_back(row);
        }
    }
    est.rates = fit_rates(est.table, opt.saturation_fraction);
    est.estimate = 0.0;
    est.valid = false;
    for (const auto& r : est.rates) {
        if (r.window >= 2) {
            est.valid = true;
            est.estimate = std::max(est.estimate, r.rate);
        }
    }
    return est;
}

FiberEntropy fiber_entropy(const TorusMap& f, const DisplacementField& field,
                           const TorusPoint& x, const FiberOptions& opt) {
    if (field.residual > opt.tol / 10.0)
        throw Error("fiber_entropy: field residual exceeds tol/10");
    const int d = field.d;
    std::vector<int> res = opt.box_res;
    if (res.empty()) res.assign(d, 41);
    std::vector<std::int64_t> stride(d);
    std::int64_t total = 1;
    for (int i = d - 1; i >= 0; --i) {
        stride[i] = total;
        total *= res[i];
    }

    FiberEntropy out;
    std::vector<std::uint8_t> flag(total, 0);
    set_threads(opt.est.threads);
#pragma omp parallel for schedule(static)
    for (std::int64_t id = 0; id < total; ++id) {
        TorusPoint y;
        y.c.resize(d);
        for (int i = 0; i < d; ++i) {
            std::int64_t k = (id / stride[i]) % res[i];
            double t = opt.box_lo[i] + (opt.box_hi[i] - opt.box_lo[i]) * k / (res[i] - 1);
            y.c[i] = t - std::floor(t);
        }
        if (torus_dist(evaluate_h(field, y), x) < opt.tol) flag[id] = 1;
    }
    for (std::int64_t id = 0; id < total; ++id) {
        if (!flag[id]) continue;
        TorusPoint y;
        y.c.resize(d);
        for (int i = 0; i < d; ++i) {
            std::int64_t k = (id / stride[i]) % res[i];
            double t = opt.box_lo[i] + (opt.box_hi[i] - opt.box_lo[i]) * k / (res[i] - 1);
            y.c[i] = t - std::floor(t);
        }
        out.members.push_back(y);
    }
    if (out.members.empty())
        throw Error("fiber_entropy: empty class sample; increase tol");
    out.estimate = estimate_entropy(f, out.members, opt.n_range, opt.eps_list, opt.est);
    return out;
}

FiberBoundReport fiber_interval_bound(const TorusMap& f, const std::vector<TorusPoint>& members,
                                      int n_max, double eps, int threads) {
    FiberBoundReport rep;
    rep.eps = eps;
    OrbitTable tab = orbit_table(f, members, n_max, threads);

    // measured L: max diameter of the iterated class over the horizon
    double L = 0.0;
    std::size_t cap = 1200;
    std::size_t m = members.size();
    std::size_t step = m > cap ? (m + cap - 1) / cap : 1;
    for (int n = 0; n < n_max; ++n) {
        for (std::size_t i = 0; i < m; i += step) {
            for (std::size_t j = i + step; j < m; j += step) {
                const double* a = tab.row(static_cast<std::int64_t>(i), n);
                const double* b = tab.row(static_cast<std::int64_t>(j), n);
                double s = 0.0;
                for (int k = 0; k < tab.d; ++k) {
                    double dd = std::abs(a[k] - b[k]);
                    if (dd > 0.5) dd = 1.0 - dd;
                    s += dd * dd;
                }
                L = std::max(L, std::sqrt(s));
            }
        }
    }
    rep.L = L;
    rep.pass = true;
    std::vector<std::int64_t> seed;
    for (int n = 1; n <= n_max; ++n) {
        SeparatedSet s = separated_count_seeded(tab, n, eps, seed);
        seed = s.selected;
        FiberBoundRow row;
        row.n = n;
        row.separated = s.count;
        row.bound = n * (L / eps + 1.0);
        if (static_cast<double>(row.separated) > row.bound) rep.pass = false;
        rep.rows.push_back(row);
    }
    return rep;
}

namespace {

// image of a fold-plane point under the map, in disc units of the chart
Vec2 plane_image(const TorusMap& f, const MatX& V, const MatX& Vinv, double delta,
                 double offset, const Vec2& z) {
    VecX xi(4);
    xi << offset * delta, delta * z.x(), delta * z.y(), 0.0;
    VecX amb = V * xi;
    TorusPoint x = make_torus_point(amb);
    TorusPoint fx = f.apply(x);
    VecX rep = fx.c;
    for (int i = 0; i < 4; ++i)
        if (rep[i] >= 0.5) rep[i] -= 1.0;
    VecX xi2 = Vinv * rep;
    return Vec2(xi2[1] / delta, xi2[2] / delta);
}

}  // namespace

JumpCertificate certify_jump(const TorusMap& f, const MatX& V, const MatX& Vinv,
                             double delta, const HorseshoeIsotopy& iso, const JumpOptions& opt) {
    JumpCertificate cert;
    const MarkovRect& R0 = iso.rect(0);
    const MarkovRect& R1 = iso.rect(1);
    const double foot_lo = std::min(R0.x_lo, R1.x_lo);
    const double foot_hi = std::max(R0.x_hi, R1.x_hi);

    double worst_clearance = 1e9;
    double min_fiber_y = 1e9;
    bool fail = false;
    Vec2 witness = Vec2::Zero();

    for (const MarkovRect* R : {&R0, &R1}) {
        for (int yi = 0; yi <= opt.edge_samples && !fail; ++yi) {
            double y = R->y_lo + (R->y_hi - R->y_lo) * yi / opt.edge_samples;
            Vec2 il = plane_image(f, V, Vinv, delta, opt.radial_offset, Vec2(R->x_lo, y));
            Vec2 ir = plane_image(f, V, Vinv, delta, opt.radial_offset, Vec2(R->x_hi, y));
            // the fiber's endpoints must clear the rectangle footprint on
            // opposite sides (full crossing of both rectangles)
            double lo = std::min(il.x(), ir.x());
            double hi = std::max(il.x(), ir.x());
            double cl = std::min(foot_lo - lo, hi - foot_hi);
            if (cl < worst_clearance) worst_clearance = cl;
            if (cl <= 0.0) {
                fail = true;
                witness = Vec2(R->x_lo, y);
                break;
            }
            // interior of the fiber stays inside the common y-window
            for (int xi = 0; xi <= opt.fiber_samples; ++xi) {
                double x = R->x_lo + (R->x_hi - R->x_lo) * xi / opt.fiber_samples;
                Vec2 im = plane_image(f, V, Vinv, delta, opt.radial_offset, Vec2(x, y));
                double my = std::min(im.y() - R->y_lo, R->y_hi - im.y());
                if (my < min_fiber_y) min_fiber_y = my;
                if (my <= 0.0) {
                    fail = true;
                    witness = Vec2(x, y);
                    break;
                }
            }
        }
        if (fail) break;
    }

    // one-step expansion along each fiber (the 2-shift's expanding direction)
    double min_exp = 1e9;
    if (!fail) {
        const double hstep = 1e-5;
        for (const MarkovRect* R : {&R0, &R1}) {
            for (int yi = 0; yi <= 24; ++yi) {
                double y = R->y_lo + (R->y_hi - R->y_lo) * yi / 24.0;
                for (int xi = 0; xi <= 48; ++xi) {
                    double x = R->x_lo + (R->x_hi - R->x_lo) * xi / 48.0;
                    Vec2 a = plane_image(f, V, Vinv, delta, opt.radial_offset, Vec2(x - hstep, y));
                    Vec2 b = plane_image(f, V, Vinv, delta, opt.radial_offset, Vec2(x + hstep, y));
                    double e = (b - a).norm() / (2.0 * hstep);
                    if (e < min_exp) min_exp = e;
                }
            }
        }
        if (min_exp <= 1.0) {
            fail = true;
            cert.refusal = "no expansion across the rectangles";
        }
    } else {
        cert.refusal = "crossing violated";
        cert.witness = witness;
    }

    cert.crossing_margin = std::min(worst_clearance, min_fiber_y);
    cert.min_fiber_expansion = fail ? 0.0 : min_exp;
    cert.markov_verified = !fail;
    if (cert.markov_verified) cert.fiber_rate = std::log(2.0);

    // mu_min: unstable-cone expansion over sampled chart points
    ConeField ucone = make_unstable_cone(f.linear_part(), opt.aperture);
    Rng rng(opt.seed);
    std::vector<TorusPoint> pts;
    pts.reserve(opt.chart_points);
    for (int i = 0; i < opt.chart_points; ++i) {
        VecX xi(4);
        for (int k = 0; k < 4; ++k) xi[k] = rng.uniform(-2.0 * delta, 2.0 * delta);
        VecX amb = V * xi;
        pts.push_back(make_torus_point(amb));
    }
    cert.mu_min = min_cone_expansion(f, ucone, pts, opt.directions);

    if (cert.markov_verified && cert.mu_min > 1.0)
        cert.certified_lower_bound = std::log(2.0) + std::log(cert.mu_min);
    return cert;
}

JumpCertificate certify_jump(const T4Example& ex, const JumpOptions& opt) {
    return certify_jump(*ex.map, ex.map->frame(), ex.map->frame_inv(), ex.delta,
                        ex.isotopy, opt);
}

BowenReport bowen_inequality_check(double estimate_f, double linear_entropy_A,
                                   double max_fiber_rate, double slack) {
    BowenReport rep;
    rep.estimate_f = estimate_f;
    rep.linear_entropy_A = linear_entropy_A;
    rep.max_fiber_rate = max_fiber_rate;
    rep.difference = estimate_f - (linear_entropy_A + max_fiber_rate);
    rep.slack = slack;
    rep.pass = rep.difference <= slack;
    return rep;
}

CoverageCurve transitivity_scan(const TorusMap& f, const TorusPoint& x0, std::int64_t iterations,
                                int resolution, int checkpoints) {
    if (iterations < 1) throw Error("transitivity_scan: iterations must be >= 1");
    const int d = f.dim();
    CoverageCurve curve;
    curve.resolution = resolution;
    std::int64_t boxes = 1;
    for (int i = 0; i < d; ++i) boxes *= resolution;
    curve.boxes = boxes;
    std::vector<std::uint8_t> seen(boxes, 0);
    std::int64_t visited = 0;

    TorusPoint x = x0;
    std::int64_t stride_cp = std::max<std::int64_t>(1, iterations / checkpoints);
    for (std::int64_t step = 1; step <= iterations; ++step) {
        std::int64_t id = 0;
        for (int k = 0; k < d; ++k) {
            int c = static_cast<int>(x.c[k] * resolution);
            if (c >= resolution) c = resolution - 1;
            id = id * resolution + c;
        }
        if (!seen[id]) {
            seen[id] = 1;
            ++visited;
        }
        if (step % stride_cp == 0 || step == iterations) {
            curve.rows.push_back({step, visited, static_cast<double>(visited) / boxes});
        }
        x = f.apply(x);
    }
    return curve;
}

}  // namespace dalab
