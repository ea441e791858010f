#include "dalab/cones.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "dalab/kernels.hpp"

namespace dalab {

namespace {

// real eigen-split basis, columns sorted by ascending eigenvalue modulus;
// complex pairs contribute their real/imaginary parts
MatX eigen_split_frame(const LinearPart& A) {
    const int d = A.dim();
    Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(A.mat()), true);
    Eigen::VectorXcd ev = es.eigenvalues();
    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(ev[a]) < std::abs(ev[b]); });

    MatX Q(d, d);
    std::vector<bool> used(d, false);
    int col = 0;
    for (int oi = 0; oi < d; ++oi) {
        int k = order[oi];
        if (used[k]) continue;
        used[k] = true;
        if (std::abs(ev[k].imag()) < 1e-12) {
            Eigen::VectorXd v = es.eigenvectors().col(k).real();
            Q.col(col++) = v.normalized();
        } else {
            // find the conjugate partner and take Re, Im
            for (int j = 0; j < d; ++j) {
                if (!used[j] && std::abs(ev[j] - std::conj(ev[k])) < 1e-9) {
                    used[j] = true;
                    break;
                }
            }
            Eigen::VectorXd re = es.eigenvectors().col(k).real();
            Eigen::VectorXd im = es.eigenvectors().col(k).imag();
            Q.col(col++) = re.normalized();
            Q.col(col++) = im.normalized();
        }
    }
    if (col != d) throw Error("eigen_split_frame: eigenbasis construction failed");
    return Q;
}

int count_below_one(const LinearPart& A) {
    int c = 0;
    for (int i = 0; i < A.eigenvalues().size(); ++i)
        if (std::abs(A.eigenvalues()[i]) < 1.0) ++c;
    return c;
}

// deterministic unit directions in dimension k
std::vector<VecX> unit_directions(int k, int want) {
    std::vector<VecX> dirs;
    if (k == 1) {
        VecX a(1), b(1);
        a << 1.0;
        b << -1.0;
        dirs.push_back(a);
        dirs.push_back(b);
    } else if (k == 2) {
        int m = std::max(4, want);
        for (int i = 0; i < m; ++i) {
            double th = 2.0 * M_PI * i / m;
            VecX v(2);
            v << std::cos(th), std::sin(th);
            dirs.push_back(v);
        }
    } else {
        // Fibonacci sphere on S^{k-1}, k = 3 (k = 4+ falls back to a seeded set)
        int m = std::max(8, want);
        if (k == 3) {
            const double ga = M_PI * (3.0 - std::sqrt(5.0));
            for (int i = 0; i < m; ++i) {
                double z = 1.0 - 2.0 * (i + 0.5) / m;
                double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                double th = ga * i;
                VecX v(3);
                v << r * std::cos(th), r * std::sin(th), z;
                dirs.push_back(v);
            }
        } else {
            Rng rng(777);
            for (int i = 0; i < m; ++i) {
                VecX v(k);
                double n2 = 0.0;
                for (int j = 0; j < k; ++j) {
                    double g = rng.uniform() + rng.uniform() + rng.uniform() - 1.5;  // ~gaussian
                    v[j] = g;
                    n2 += g * g;
                }
                dirs.push_back(v / std::sqrt(n2));
            }
        }
    }
    return dirs;
}

// boundary + interior cone vectors in frame coordinates
std::vector<VecX> cone_directions(const ConeField& cone, int want) {
    const int d = cone.dim();
    const int kc = cone.core_dim;
    const int ko = d - kc;
    int per_core = kc == 1 ? 2 : (want / 8 + 4);
    int per_co = std::max(4, want / per_core);
    auto core_dirs = unit_directions(kc, per_core);
    auto co_dirs = unit_directions(ko, per_co);
    std::vector<VecX> out;
    const double fractions[3] = {1.0, 0.5, 0.0};  // boundary, interior, core axis
    for (const auto& c : core_dirs) {
        for (const auto& e : co_dirs) {
            for (double fr : fractions) {
                VecX w = VecX::Zero(d);
                for (int i = 0; i < kc; ++i) w[cone.core_offset + i] = c[i];
                int oi = 0;
                for (int i = 0; i < d; ++i) {
                    if (i >= cone.core_offset && i < cone.core_offset + kc) continue;
                    w[i] = fr * cone.aperture * e[oi++];
                }
                out.push_back(w / w.norm());
                if (fr == 0.0) break;  // core axis does not depend on e
            }
        }
    }
    return out;
}

}  // namespace

ConeField make_unstable_cone(const LinearPart& A, double aperture) {
    ConeField c;
    c.kind = ConeKind::Unstable;
    c.frame = eigen_split_frame(A);
    c.frame_inv = c.frame.inverse();
    int ds = count_below_one(A);
    c.core_offset = ds;
    c.core_dim = A.dim() - ds;
    c.aperture = aperture;
    if (c.core_dim == 0) throw Error("make_unstable_cone: no expanding directions");
    return c;
}

ConeField make_stable_cone(const LinearPart& A, double aperture, int core_dim) {
    ConeField c;
    c.kind = ConeKind::Stable;
    c.frame = eigen_split_frame(A);
    c.frame_inv = c.frame.inverse();
    int ds = count_below_one(A);
    if (ds == 0) throw Error("make_stable_cone: no contracting directions");
    c.core_offset = 0;
    c.core_dim = core_dim > 0 ? core_dim : ds;
    c.aperture = aperture;
    return c;
}

HyperbolicityCertificate check_cone_invariance(const TorusMap& f,
                                               const std::vector<ConeField>& cones,
                                               const std::vector<TorusPoint>& samples,
                                               int directions_per_point, int threads) {
    HyperbolicityCertificate cert;
    cert.samples = static_cast<std::int64_t>(samples.size());
    cert.directions = directions_per_point;
    set_threads(threads);

    for (const auto& cone : cones) {
        const int d = cone.dim();
        auto dirs = cone_directions(cone, directions_per_point);
        ConeCheck chk;
        chk.kind = cone.kind;
        chk.aperture = cone.aperture;
        const double cone_angle = std::atan(cone.aperture);

        double margin = 1e18;
        double mu_min = 1e18;
        double lam_max = 0.0;
        std::int64_t witness_i = -1;
        int witness_j = -1;

        const std::int64_t m = static_cast<std::int64_t>(samples.size());
#pragma omp parallel
        {
            double l_margin = 1e18, l_mu = 1e18, l_lam = 0.0;
            std::int64_t l_wi = -1;
            int l_wj = -1;
#pragma omp for schedule(static)
            for (std::int64_t i = 0; i < m; ++i) {
                MatX J = f.jacobian(samples[i]);
                MatX Jf;
                if (cone.kind == ConeKind::Unstable) {
                    Jf = cone.frame_inv * J * cone.frame;
                } else {
                    Jf = (cone.frame_inv * J * cone.frame).inverse();
                }
                for (std::size_t j = 0; j < dirs.size(); ++j) {
                    VecX w = Jf * dirs[j];
                    double core2 = 0.0, co2 = 0.0;
                    for (int k = 0; k < d; ++k) {
                        if (k >= cone.core_offset && k < cone.core_offset + cone.core_dim)
                            core2 += w[k] * w[k];
                        else
                            co2 += w[k] * w[k];
                    }
                    double img_angle = std::atan2(std::sqrt(co2), std::sqrt(core2));
                    double mg = cone_angle - img_angle;
                    if (mg < l_margin) {
                        l_margin = mg;
                        l_wi = i;
                        l_wj = static_cast<int>(j);
                    }
                    double growth = w.norm();  // dirs are unit in frame coords
                    if (cone.kind == ConeKind::Unstable) {
                        if (growth < l_mu) l_mu = growth;
                    } else {
                        // growth under J^{-1}; forward contraction is 1/growth
                        if (growth > 1e-300) l_lam = std::max(l_lam, 1.0 / growth);
                    }
                }
            }
#pragma omp critical
            {
                if (l_margin < margin ||
                    (l_margin == margin && (l_wi < witness_i || witness_i < 0))) {
                    margin = std::min(margin, l_margin);
                    witness_i = l_wi;
                    witness_j = l_wj;
                }
                mu_min = std::min(mu_min, l_mu);
                lam_max = std::max(lam_max, l_lam);
            }
        }

        chk.margin = margin;
        chk.mu_min = cone.kind == ConeKind::Unstable ? mu_min : 0.0;
        chk.lambda_max = cone.kind == ConeKind::Stable ? lam_max : 0.0;
        if (cone.kind == ConeKind::Unstable)
            chk.pass = chk.margin > 0.0 && chk.mu_min > 1.0;
        else
            chk.pass = chk.margin > 0.0 && chk.lambda_max < 1.0;
        if (!chk.pass && witness_i >= 0) {
            chk.has_witness = true;
            chk.witness = samples[static_cast<std::size_t>(witness_i)];
            chk.witness_dir = cone.frame * dirs[static_cast<std::size_t>(witness_j)];
        }
        cert.checks.push_back(std::move(chk));
    }
    cert.pass = !cert.checks.empty();
    for (const auto& c : cert.checks) cert.pass = cert.pass && c.pass;
    return cert;
}

double min_cone_expansion(const TorusMap& f, const ConeField& ucone,
                          const std::vector<TorusPoint>& samples, int directions_per_point,
                          int threads) {
    if (ucone.kind != ConeKind::Unstable)
        throw Error("min_cone_expansion: unstable cone required");
    set_threads(threads);
    auto dirs = cone_directions(ucone, directions_per_point);
    const std::int64_t m = static_cast<std::int64_t>(samples.size());
    double mu = 1e18;
#pragma omp parallel
    {
        double local = 1e18;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < m; ++i) {
            MatX Jf = ucone.frame_inv * f.jacobian(samples[i]) * ucone.frame;
            for (const auto& w0 : dirs) {
                double g = (Jf * w0).norm();
                if (g < local) local = g;
            }
        }
#pragma omp critical
        local < mu ? mu = local : mu;
    }
    return mu;
}

EmpiricalRates empirical_rates(const TorusMap& f, const ConeField& ucone,
                               const ConeField& scone, const std::vector<TorusPoint>& samples,
                               int n, int threads) {
    set_threads(threads);
    EmpiricalRates rates;
    rates.lambda_u = 1e18;
    rates.lambda_s = 0.0;
    const std::int64_t m = static_cast<std::int64_t>(samples.size());

#pragma omp parallel
    {
        double lu = 1e18, ls = 0.0;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < m; ++i) {
            // unstable: push a core vector forward
            {
                VecX w = VecX::Zero(ucone.dim());
                w[ucone.core_offset] = 1.0;
                TorusPoint x = samples[i];
                double logsum = 0.0;
                for (int k = 0; k < n; ++k) {
                    MatX Jf = ucone.frame_inv * f.jacobian(x) * ucone.frame;
                    w = Jf * w;
                    double nn = w.norm();
                    logsum += std::log(nn);
                    w /= nn;
                    x = f.apply(x);
                }
                lu = std::min(lu, std::exp(logsum / n));
            }
            // stable: push a core vector through the inverse along the backward orbit
            {
                VecX w = VecX::Zero(scone.dim());
                w[scone.core_offset] = 1.0;
                TorusPoint x = samples[i];
                double logsum = 0.0;
                for (int k = 0; k < n; ++k) {
                    MatX Jf = (scone.frame_inv * f.jacobian(f.invert(x)) * scone.frame).inverse();
                    w = Jf * w;
                    double nn = w.norm();
                    logsum += std::log(nn);
                    w /= nn;
                    x = f.invert(x);
                }
                // growth under the inverse; forward contraction is its reciprocal
                ls = std::max(ls, std::exp(-logsum / n));
            }
        }
#pragma omp critical
        {
            rates.lambda_u = std::min(rates.lambda_u, lu);
            rates.lambda_s = std::max(rates.lambda_s, ls);
        }
    }
    return rates;
}

}  // namespace dalab
