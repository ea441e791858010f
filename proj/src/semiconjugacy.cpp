#include "dalab/semiconjugacy.hpp"

#include <algorithm>
#include <cmath>

#include "dalab/kernels.hpp"

namespace dalab {

namespace {

void axis_strides(const std::vector<int>& res, std::int64_t* stride, int d) {
    std::int64_t s = 1;
    for (int i = d - 1; i >= 0; --i) {
        stride[i] = s;
        s *= res[i];
    }
}

// Catmull-Rom basis weights for fractional position t in [0,1)
inline void catmull_rom_w(double t, double* w) {
    double t2 = t * t, t3 = t2 * t;
    w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
    w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
    w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
    w[3] = 0.5 * (t3 - t2);
}

// periodic interpolation of one component field on a full-torus level
void interp_periodic(const GridLevel& g, InterpOrder order, const std::vector<double>& field,
                     const double* x, int d, double* out) {
    std::int64_t stride[kMaxDim];
    axis_strides(g.res, stride, d);
    for (int k = 0; k < d; ++k) out[k] = 0.0;

    if (order == InterpOrder::Linear) {
        int base[kMaxDim];
        double fr[kMaxDim];
        for (int i = 0; i < d; ++i) {
            double t = (x[i] - std::floor(x[i])) * g.res[i];
            int b = static_cast<int>(t);
            if (b >= g.res[i]) b = g.res[i] - 1;
            base[i] = b;
            fr[i] = t - b;
        }
        const int corners = 1 << d;
        for (int c = 0; c < corners; ++c) {
            std::int64_t id = 0;
            double weight = 1.0;
            for (int i = 0; i < d; ++i) {
                int off = (c >> i) & 1;
                int bi = base[i] + off;
                if (bi >= g.res[i]) bi -= g.res[i];
                id += stride[i] * bi;
                weight *= off ? fr[i] : (1.0 - fr[i]);
            }
            const double* v = field.data() + id * d;
            for (int k = 0; k < d; ++k) out[k] += weight * v[k];
        }
        return;
    }

    // cubic: 4 taps per axis
    int base[kMaxDim];
    double wts[kMaxDim][4];
    for (int i = 0; i < d; ++i) {
        double t = (x[i] - std::floor(x[i])) * g.res[i];
        int b = static_cast<int>(t);
        if (b >= g.res[i]) b = g.res[i] - 1;
        base[i] = b;
        catmull_rom_w(t - b, wts[i]);
    }
    int taps = 1;
    for (int i = 0; i < d; ++i) taps *= 4;
    for (int c = 0; c < taps; ++c) {
        std::int64_t id = 0;
        double weight = 1.0;
        int cc = c;
        for (int i = 0; i < d; ++i) {
            int off = cc & 3;
            cc >>= 2;
            int bi = base[i] + off - 1;
            bi %= g.res[i];
            if (bi < 0) bi += g.res[i];
            id += stride[i] * bi;
            weight *= wts[i][off];
        }
        const double* v = field.data() + id * d;
        for (int k = 0; k < d; ++k) out[k] += weight * v[k];
    }
}

// clamped multilinear interpolation on a box level
void interp_box(const GridLevel& g, const std::vector<double>& field, const double* x, int d,
                double* out) {
    std::int64_t stride[kMaxDim];
    axis_strides(g.res, stride, d);
    int base[kMaxDim];
    double fr[kMaxDim];
    for (int i = 0; i < d; ++i) {
        double t = (x[i] - g.lo[i]) / (g.hi[i] - g.lo[i]) * (g.res[i] - 1);
        if (t < 0.0) t = 0.0;
        if (t > g.res[i] - 1.000000001) t = g.res[i] - 1.000000001;
        int b = static_cast<int>(t);
        base[i] = b;
        fr[i] = t - b;
    }
    for (int k = 0; k < d; ++k) out[k] = 0.0;
    const int corners = 1 << d;
    for (int c = 0; c < corners; ++c) {
        std::int64_t id = 0;
        double weight = 1.0;
        for (int i = 0; i < d; ++i) {
            int off = (c >> i) & 1;
            id += stride[i] * (base[i] + off);
            weight *= off ? fr[i] : (1.0 - fr[i]);
        }
        const double* v = field.data() + id * d;
        for (int k = 0; k < d; ++k) out[k] += weight * v[k];
    }
}

void centered(const TorusPoint& x, double* out, int d) {
    for (int i = 0; i < d; ++i) {
        double v = x.c[i];
        if (v >= 0.5) v -= 1.0;
        out[i] = v;
    }
}

double fine_weight(const GridLevel& g, const double* rep, int d) {
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
        double lo = g.lo[i], hi = g.hi[i];
        double band = 0.12 * (hi - lo);
        if (rep[i] <= lo || rep[i] >= hi) return 0.0;
        double din = std::min(rep[i] - lo, hi - rep[i]);
        w *= smoothstep5(din / band);
    }
    return w;
}

void eval_component_grid(const DisplacementField& f, bool stable, const TorusPoint& x,
                         double* out) {
    const int d = f.d;
    double xv[kMaxDim];
    for (int i = 0; i < d; ++i) xv[i] = x.c[i];
    interp_periodic(f.coarse, f.interp, stable ? f.coarse.us : f.coarse.uu, xv, d, out);
    if (f.fine) {
        double rep[kMaxDim];
        centered(x, rep, d);
        double wf = fine_weight(*f.fine, rep, d);
        if (wf > 0.0) {
            double fine_val[kMaxDim];
            interp_box(*f.fine, stable ? f.fine->us : f.fine->uu, rep, d, fine_val);
            for (int k = 0; k < d; ++k) out[k] = (1.0 - wf) * out[k] + wf * fine_val[k];
        }
    }
}

VecX eval_series(const SeriesEval& se, const TorusPoint& x) {
    const TorusMap& f = *se.map;
    const int d = f.dim();
    const MatX& A = f.linear_part().mat();
    const MatX& Ainv = f.linear_part().inv();

    // unstable sum: A^{-(k+1)} Pu p(F^k x)
    VecX uu = VecX::Zero(d);
    {
        TorusPoint y = x;
        MatX Apow = Ainv;
        for (int k = 0; k < se.unstable_terms; ++k) {
            VecX p = f.displacement(y);
            if (p.squaredNorm() > 0.0) uu += Apow * (se.Pu * p);
            y = f.apply(y);
            Apow = Ainv * Apow;
        }
    }
    // stable sum: -A^k Ps p(F^{-k-1} x)
    VecX us = VecX::Zero(d);
    {
        TorusPoint y = x;
        MatX Apow = MatX::Identity(d, d);
        for (int k = 0; k < se.stable_terms; ++k) {
            y = f.invert(y);
            VecX p = f.displacement(y);
            if (p.squaredNorm() > 0.0) us -= Apow * (se.Ps * p);
            Apow = A * Apow;
        }
    }
    return us + uu;
}

}  // namespace

std::int64_t GridLevel::nodes() const {
    std::int64_t n = 1;
    for (int r : res) n *= r;
    return n;
}

VecX GridLevel::spacing() const {
    VecX s(static_cast<int>(res.size()));
    for (std::size_t i = 0; i < res.size(); ++i) {
        double extent = hi[static_cast<int>(i)] - lo[static_cast<int>(i)];
        s[static_cast<int>(i)] = periodic ? extent / res[i] : extent / (res[i] - 1);
    }
    return s;
}

VecX DisplacementField::eval_u(const TorusPoint& x) const {
    if (series) return eval_series(*series, x);
    double us_v[kMaxDim], uu_v[kMaxDim];
    eval_component_grid(*this, true, x, us_v);
    eval_component_grid(*this, false, x, uu_v);
    VecX out(d);
    for (int k = 0; k < d; ++k) out[k] = us_v[k] + uu_v[k];
    return out;
}

TorusPoint evaluate_h(const DisplacementField& field, const TorusPoint& x) {
    return project(LiftPoint{x.c + field.eval_u(x)});
}

LiftPoint evaluate_h_lift(const DisplacementField& field, const LiftPoint& x) {
    return LiftPoint{x.c + field.eval_u(project(x))};
}

namespace {

struct NodeData {
    std::vector<double> fwd;   // F(node) as torus coords
    std::vector<double> bwd;   // F^{-1}(node)
    std::vector<double> pu;    // Pu p(node)
    std::vector<double> psb;   // Ps p(F^{-1} node)
};

TorusPoint node_point(const GridLevel& g, std::int64_t id, const std::int64_t* stride, int d) {
    TorusPoint x;
    x.c.resize(d);
    for (int i = 0; i < d; ++i) {
        std::int64_t k = (id / stride[i]) % g.res[i];
        double t = g.periodic ? static_cast<double>(k) / g.res[i]
                              : g.lo[i] + (g.hi[i] - g.lo[i]) * k / (g.res[i] - 1);
        x.c[i] = t - std::floor(t);
    }
    return x;
}

NodeData precompute(const TorusMap& f, const GridLevel& g, const MatX& Pu, const MatX& Ps,
                    int threads) {
    const int d = f.dim();
    const std::int64_t n = g.nodes();
    NodeData nd;
    nd.fwd.resize(n * d);
    nd.bwd.resize(n * d);
    nd.pu.resize(n * d);
    nd.psb.resize(n * d);
    set_threads(threads);
    std::int64_t stride[kMaxDim];
    axis_strides(g.res, stride, d);

#pragma omp parallel for schedule(static)
    for (std::int64_t id = 0; id < n; ++id) {
        TorusPoint x = node_point(g, id, stride, d);
        TorusPoint fx = f.apply(x);
        TorusPoint bx = f.invert(x);
        VecX pu = Pu * f.displacement(x);
        VecX psb = Ps * f.displacement(bx);
        for (int i = 0; i < d; ++i) {
            nd.fwd[id * d + i] = fx.c[i];
            nd.bwd[id * d + i] = bx.c[i];
            nd.pu[id * d + i] = pu[i];
            nd.psb[id * d + i] = psb[i];
        }
    }
    return nd;
}

double measure_residual(const TorusMap& f, const DisplacementField& field,
                        const std::vector<TorusPoint>& sample,
                        const std::vector<TorusPoint>& sample_fwd,
                        const std::vector<VecX>& sample_p) {
    const MatX& A = f.linear_part().mat();
    double worst = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        VecX u = field.eval_u(sample[i]);
        VecX uf = field.eval_u(sample_fwd[i]);
        VecX defect = A * u - sample_p[i] - uf;
        worst = std::max(worst, defect.template lpNorm<Eigen::Infinity>());
    }
    return worst;
}

}  // namespace

DisplacementField solve_franks(const TorusMap& f, const FranksOptions& opt) {
    const int d = f.dim();
    auto hw = is_hyperbolic(f.linear_part());
    if (!hw.hyperbolic) throw Error("solve_franks: linear part is not hyperbolic");
    SpectralSplit split = spectral_split(f.linear_part());
    const MatX& A = f.linear_part().mat();
    const MatX& Ainv = f.linear_part().inv();

    DisplacementField field;
    field.d = d;
    field.interp = opt.interp;
    field.coarse.res = opt.coarse_res;
    field.coarse.lo = VecX::Zero(d);
    field.coarse.hi = VecX::Ones(d);
    field.coarse.periodic = true;
    field.coarse.us.assign(field.coarse.nodes() * d, 0.0);
    field.coarse.uu.assign(field.coarse.nodes() * d, 0.0);
    if (opt.fine_res) {
        GridLevel fine;
        fine.res = *opt.fine_res;
        fine.lo = opt.fine_lo;
        fine.hi = opt.fine_hi;
        fine.periodic = false;
        fine.us.assign(fine.nodes() * d, 0.0);
        fine.uu.assign(fine.nodes() * d, 0.0);
        field.fine = std::move(fine);
    }

    NodeData coarse_nd = precompute(f, field.coarse, split.unstable_projector,
                                    split.stable_projector, opt.threads);
    NodeData fine_nd;
    if (field.fine)
        fine_nd = precompute(f, *field.fine, split.unstable_projector, split.stable_projector,
                             opt.threads);

    Rng rng(opt.seed);
    std::vector<TorusPoint> sample;
    sample.reserve(opt.residual_sample);
    for (int i = 0; i < opt.residual_sample; ++i) {
        TorusPoint p;
        p.c.resize(d);
        for (int k = 0; k < d; ++k) p.c[k] = rng.uniform();
        sample.push_back(p);
    }
    std::vector<TorusPoint> sample_fwd(sample.size());
    std::vector<VecX> sample_p(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        sample_fwd[i] = f.apply(sample[i]);
        sample_p[i] = f.displacement(sample[i]);
    }

    GridLevel next_coarse = field.coarse;
    std::optional<GridLevel> next_fine = field.fine;

    auto sweep = [&](const GridLevel& g, const NodeData& nd, GridLevel& out) {
        const std::int64_t n = g.nodes();
#pragma omp parallel for schedule(static)
        for (std::int64_t id = 0; id < n; ++id) {
            TorusPoint fx, bx;
            fx.c.resize(d);
            bx.c.resize(d);
            for (int i = 0; i < d; ++i) {
                fx.c[i] = nd.fwd[id * d + i];
                bx.c[i] = nd.bwd[id * d + i];
            }
            double uu_f[kMaxDim], us_b[kMaxDim];
            eval_component_grid(field, false, fx, uu_f);
            eval_component_grid(field, true, bx, us_b);
            // uu(x) <- A^{-1} (Pu p(x) + uu(F x));  us(x) <- A us(F^{-1}x) - Ps p(F^{-1}x)
            VecX rhs_u(d), rhs_s(d);
            for (int i = 0; i < d; ++i) {
                rhs_u[i] = nd.pu[id * d + i] + uu_f[i];
                rhs_s[i] = us_b[i];
            }
            VecX new_u = Ainv * rhs_u;
            VecX new_s = A * rhs_s;
            for (int i = 0; i < d; ++i) {
                out.uu[id * d + i] = new_u[i];
                out.us[id * d + i] = new_s[i] - nd.psb[id * d + i];
            }
        }
    };

    set_threads(opt.threads);
    double res = measure_residual(f, field, sample, sample_fwd, sample_p);
    field.residual_history.push_back(res);
    int it = 0;
    for (; it < opt.max_iter && res >= opt.tol_residual; ++it) {
        sweep(field.coarse, coarse_nd, next_coarse);
        if (field.fine) sweep(*field.fine, fine_nd, *next_fine);
        std::swap(field.coarse, next_coarse);
        if (field.fine) std::swap(*field.fine, *next_fine);
        res = measure_residual(f, field, sample, sample_fwd, sample_p);
        field.residual_history.push_back(res);
    }
    field.iterations = it;
    field.residual = res;
    field.flagged = res >= opt.tol_residual;

    double sup_u = 0.0;
    {
        const std::int64_t n = field.coarse.nodes();
        for (std::int64_t id = 0; id < n; ++id) {
            double s2 = 0.0;
            for (int i = 0; i < d; ++i) {
                double v = field.coarse.us[id * d + i] + field.coarse.uu[id * d + i];
                s2 += v * v;
            }
            sup_u = std::max(sup_u, std::sqrt(s2));
        }
    }
    field.sup_u = sup_u;
    double sup_pu = 0.0, sup_ps = 0.0;
    {
        const std::int64_t n = field.coarse.nodes();
        for (std::int64_t id = 0; id < n; ++id) {
            double s2u = 0.0, s2s = 0.0;
            for (int i = 0; i < d; ++i) {
                s2u += coarse_nd.pu[id * d + i] * coarse_nd.pu[id * d + i];
                s2s += coarse_nd.psb[id * d + i] * coarse_nd.psb[id * d + i];
            }
            sup_pu = std::max(sup_pu, std::sqrt(s2u));
            sup_ps = std::max(sup_ps, std::sqrt(s2s));
        }
    }
    field.a_priori_bound = sup_pu / (split.expansion_rate - 1.0) +
                           sup_ps / (1.0 - split.contraction_rate);
    return field;
}

DisplacementField series_field(std::shared_ptr<const TorusMap> f, const SeriesOptions& opt) {
    auto hw = is_hyperbolic(f->linear_part());
    if (!hw.hyperbolic) throw Error("series_field: linear part is not hyperbolic");
    SpectralSplit split = spectral_split(f->linear_part());

    DisplacementField field;
    field.d = f->dim();
    SeriesEval se;
    se.map = f;
    se.stable_terms = opt.stable_terms;
    se.unstable_terms = opt.unstable_terms;
    se.Ps = split.stable_projector;
    se.Pu = split.unstable_projector;
    field.series = std::move(se);
    field.iterations = opt.stable_terms;

    const int d = field.d;
    Rng rng(opt.seed);
    std::vector<TorusPoint> sample;
    for (int i = 0; i < opt.residual_sample; ++i) {
        TorusPoint p;
        p.c.resize(d);
        for (int k = 0; k < d; ++k) p.c[k] = rng.uniform();
        sample.push_back(p);
    }
    std::vector<TorusPoint> sample_fwd(sample.size());
    std::vector<VecX> sample_p(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        sample_fwd[i] = f->apply(sample[i]);
        sample_p[i] = f->displacement(sample[i]);
    }
    field.residual = measure_residual(*f, field, sample, sample_fwd, sample_p);
    field.residual_history.push_back(field.residual);
    field.flagged = false;

    double sup_u = 0.0, sup_pu = 0.0, sup_ps = 0.0;
    Rng rng2 = rng.fork(9);
    for (int i = 0; i < opt.sup_sample; ++i) {
        TorusPoint p;
        p.c.resize(d);
        for (int k = 0; k < d; ++k) p.c[k] = rng2.uniform();
        sup_u = std::max(sup_u, field.eval_u(p).norm());
        VecX pp = f->displacement(p);
        sup_pu = std::max(sup_pu, (field.series->Pu * pp).norm());
        sup_ps = std::max(sup_ps, (field.series->Ps * pp).norm());
    }
    field.sup_u = sup_u;
    field.a_priori_bound = sup_pu / (split.expansion_rate - 1.0) +
                           sup_ps / (1.0 - split.contraction_rate);
    return field;
}

namespace {

// secant refinement of a member along the unstable directions: drives the
// unstable component of h(y) - x to ~0 so forward iterates of the sample
// track the true class
TorusPoint refine_member(const DisplacementField& field, const MatX& Pu, const VecX& udir,
                         const TorusPoint& y0, const VecX& xlift, double tol) {
    auto defect_u = [&](const TorusPoint& y) {
        VecX rep = y.c;
        for (int i = 0; i < rep.size(); ++i) {
            double diff = rep[i] - xlift[i];
            if (diff >= 0.5) rep[i] -= 1.0;
            if (diff < -0.5) rep[i] += 1.0;
        }
        VecX h = rep + field.eval_u(project(LiftPoint{rep}));
        return udir.dot(Pu * (h - xlift));
    };
    double s0 = defect_u(y0);
    double step = std::max(1e-6, std::abs(s0));
    // bracket the root along udir
    double lo = -2.0 * tol - step, hi = 2.0 * tol + step;
    auto at = [&](double t) {
        return project(LiftPoint{y0.c + t * udir});
    };
    double slo = defect_u(at(lo));
    double shi = defect_u(at(hi));
    if (slo * shi > 0.0) return y0;  // no sign change; keep the raw member
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        double sm = defect_u(at(mid));
        if (std::abs(sm) < 1e-11) return at(mid);
        if (slo * sm <= 0.0) {
            hi = mid;
            shi = sm;
        } else {
            lo = mid;
            slo = sm;
        }
    }
    return at(0.5 * (lo + hi));
}

}  // namespace

PreimageClass preimage_class(const DisplacementField& field, const TorusMap& f,
                             const TorusPoint& x, const ClassOptions& opt) {
    const int d = field.d;
    double tol = opt.tol;
    if (tol <= 0.0) {
        if (field.series) throw Error("preimage_class: tol required for series fields");
        tol = 2.0 * field.coarse.spacing().maxCoeff();
    }
    if (field.residual > tol / 10.0)
        throw Error("preimage_class: field residual exceeds tol/10; refine the solve");

    std::vector<int> res = opt.box_res;
    if (res.empty()) res.assign(d, 25);
    std::int64_t total = 1;
    std::vector<std::int64_t> stride(d);
    for (int i = d - 1; i >= 0; --i) {
        stride[i] = total;
        total *= res[i];
    }

    // unstable data for the refinement
    SpectralSplit split = spectral_split(f.linear_part());
    VecX udir = split.unstable_basis.col(0);

    // x as a lift in [0,1)^d for defect bookkeeping
    VecX xlift = x.c;

    PreimageClass cls;
    cls.base = x;
    cls.n_range = opt.n_range;
    std::vector<std::uint8_t> member_flag(total, 0);
    set_threads(opt.threads);
#pragma omp parallel for schedule(static)
    for (std::int64_t id = 0; id < total; ++id) {
        TorusPoint y;
        y.c.resize(d);
        for (int i = 0; i < d; ++i) {
            std::int64_t k = (id / stride[i]) % res[i];
            double t = opt.box_lo[i] + (opt.box_hi[i] - opt.box_lo[i]) * k / (res[i] - 1);
            y.c[i] = t - std::floor(t);
        }
        if (torus_dist(evaluate_h(field, y), x) < tol) member_flag[id] = 1;
    }
    std::vector<TorusPoint> raw;
    for (std::int64_t id = 0; id < total; ++id) {
        if (!member_flag[id]) continue;
        TorusPoint y;
        y.c.resize(d);
        for (int i = 0; i < d; ++i) {
            std::int64_t k = (id / stride[i]) % res[i];
            double t = opt.box_lo[i] + (opt.box_hi[i] - opt.box_lo[i]) * k / (res[i] - 1);
            y.c[i] = t - std::floor(t);
        }
        raw.push_back(y);
        if (raw.size() >= opt.max_members) break;
    }
    if (raw.empty())
        throw Error("preimage_class: empty class sample; increase tol or refine the grid");

    if (opt.refine_unstable) {
        cls.members.resize(raw.size());
        const std::int64_t m = static_cast<std::int64_t>(raw.size());
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < m; ++i)
            cls.members[i] = refine_member(field, split.unstable_projector, udir, raw[i], xlift, tol);
    } else {
        cls.members = std::move(raw);
    }

    auto diam_of = [&](const std::vector<TorusPoint>& pts) {
        std::size_t m = pts.size();
        std::size_t cap = 1500;
        std::size_t step = m > cap ? (m + cap - 1) / cap : 1;
        double best = 0.0;
        for (std::size_t i = 0; i < m; i += step)
            for (std::size_t j = i + step; j < m; j += step)
                best = std::max(best, torus_dist(pts[i], pts[j]));
        return best;
    };

    std::size_t tcap = 3000;
    std::size_t tstep = cls.members.size() > tcap ? (cls.members.size() + tcap - 1) / tcap : 1;
    std::vector<TorusPoint> fw, bw;
    for (std::size_t i = 0; i < cls.members.size(); i += tstep) {
        fw.push_back(cls.members[i]);
        bw.push_back(cls.members[i]);
    }
    cls.diameter = diam_of(fw);
    cls.iterate_diameters.assign(2 * opt.n_range + 1, 0.0);
    cls.iterate_diameters[opt.n_range] = cls.diameter;
    for (int n = 1; n <= opt.n_range; ++n) {
        for (auto& p : fw) p = f.apply(p);
        for (auto& p : bw) p = f.invert(p);
        cls.iterate_diameters[opt.n_range + n] = diam_of(fw);
        cls.iterate_diameters[opt.n_range - n] = diam_of(bw);
    }
    return cls;
}

double class_center_alignment(const PreimageClass& cls, const MatX& center_dirs) {
    const int d = static_cast<int>(center_dirs.rows());
    if (cls.members.size() < 2) return 1.0;

    LiftPoint anchor{cls.base.c};
    std::vector<VecX> lifts;
    lifts.reserve(cls.members.size());
    VecX mean = VecX::Zero(d);
    for (const auto& m : cls.members) {
        VecX l = nearest_lift(m, anchor).c;
        lifts.push_back(l);
        mean += l;
    }
    mean /= static_cast<double>(lifts.size());
    MatX cov = MatX::Zero(d, d);
    for (const auto& l : lifts) {
        VecX c = l - mean;
        cov += c * c.transpose();
    }
    double tr = cov.trace();
    if (tr < 1e-24) return 1.0;

    Eigen::HouseholderQR<MatX> qr(center_dirs);
    MatX Q = qr.householderQ() * MatX::Identity(d, static_cast<int>(center_dirs.cols()));
    double in_center = (Q.transpose() * cov * Q).trace();
    return in_center / tr;
}

}  // namespace dalab
