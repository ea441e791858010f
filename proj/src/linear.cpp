#include "dalab/linear.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>

namespace dalab {

namespace {

// Exact integer determinant by fraction-free (Bareiss) elimination.
long long integer_det(std::vector<std::vector<long long>> m) {
    const int n = static_cast<int>(m.size());
    long long prev = 1;
    long long sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k] == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (m[i][k] != 0) { p = i; break; }
            if (p < 0) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// Orthonormal basis of the invariant subspace for the k largest-modulus
// eigenvalues, by orthogonal (QR subspace) iteration. Works for defective
// matrices too; convergence rate is the modulus gap across index k.
MatX dominant_subspace(const MatX& M, int k) {
    const int d = static_cast<int>(M.rows());
    MatX Q = MatX::Identity(d, d).leftCols(k);
    MatX prev = Q;
    for (int it = 0; it < 25000; ++it) {
        MatX Z = M * Q;
        Eigen::HouseholderQR<MatX> qr(Z);
        MatX thinQ = MatX::Identity(d, k);
        Q = qr.householderQ() * thinQ;
        if (it % 8 == 7) {
            // subspace angle stagnation test
            MatX S = prev.transpose() * Q;
            double sv_min = S.jacobiSvd().singularValues().minCoeff();
            if (1.0 - sv_min < 1e-15) break;
            prev = Q;
        }
    }
    return Q;
}

// ||M^n restricted to span(B)||^{1/n} with orthonormal B, for n large enough to
// smooth out non-normality.
double restricted_power_rate(const MatX& M, const MatX& B, int n) {
    // operate in the subspace coordinates: columns of B span an M-invariant
    // subspace, so M*B = B*R with R = B^T M B up to the invariance defect
    MatX R = B.transpose() * M * B;
    MatX P = MatX::Identity(R.rows(), R.cols());
    double log_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        P = R * P;
        double norm = P.operatorNorm();
        if (norm > 1e100 || norm < 1e-100) {  // renormalize to stay in range
            log_sum += std::log(norm);
            P /= norm;
        }
    }
    double norm = P.operatorNorm();
    return std::exp((log_sum + std::log(norm)) / n);
}

}  // namespace

LinearPart::LinearPart(std::vector<std::vector<long long>> rows) {
    d_ = static_cast<int>(rows.size());
    if (d_ == 0) throw Error("LinearPart: empty matrix");
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != d_) throw Error("LinearPart: matrix not square");
    entries_ = std::move(rows);
    det_ = integer_det(entries_);
    if (det_ != 1 && det_ != -1)
        throw Error("LinearPart: |det| must be 1 (not a torus automorphism)");
    mat_.resize(d_, d_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) mat_(i, j) = static_cast<double>(entries_[i][j]);
    // |det| = 1, so the inverse has integer entries; compute and round.
    MatX inv = mat_.inverse();
    inv_.resize(d_, d_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) inv_(i, j) = std::round(inv(i, j));
    Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(mat_), false);
    eig_ = es.eigenvalues();
}

LiftPoint LinearPart::apply_lift(const LiftPoint& x) const {
    if (x.dim() != d_) throw DimensionError("LinearPart::apply_lift: dimension mismatch");
    LiftPoint out;
    out.c = mat_ * x.c;
    return out;
}

TorusPoint LinearPart::apply(const TorusPoint& x) const {
    return project(apply_lift(LiftPoint{x.c}));
}

HyperbolicityWitness is_hyperbolic(const LinearPart& A, double tau_hyp) {
    HyperbolicityWitness w;
    w.gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < A.eigenvalues().size(); ++i) {
        double m = std::abs(A.eigenvalues()[i]);
        double g = std::abs(m - 1.0);
        if (g < w.gap) {
            w.gap = g;
            w.closest_modulus_to_one = m;
        }
    }
    w.hyperbolic = w.gap > tau_hyp;
    return w;
}

double linear_entropy(const LinearPart& A, double tau_hyp) {
    auto w = is_hyperbolic(A, tau_hyp);
    if (!w.hyperbolic)
        throw Error("linear_entropy: matrix is not hyperbolic (|eigenvalue| = " +
                    std::to_string(w.closest_modulus_to_one) + " too close to 1)");
    double h = 0.0;
    for (int i = 0; i < A.eigenvalues().size(); ++i) {
        double m = std::abs(A.eigenvalues()[i]);
        if (m > 1.0) h += std::log(m);
    }
    return h;
}

SpectralSplit spectral_split(const LinearPart& A, double tau_hyp) {
    auto w = is_hyperbolic(A, tau_hyp);
    if (!w.hyperbolic) throw Error("spectral_split: matrix is not hyperbolic");

    const int d = A.dim();
    int du = 0;
    for (int i = 0; i < d; ++i)
        if (std::abs(A.eigenvalues()[i]) > 1.0) ++du;
    const int ds = d - du;
    if (du == 0 || ds == 0)
        throw Error("spectral_split: splitting is trivial (not Anosov on the torus)");

    SpectralSplit out;
    out.dim_stable = ds;
    out.dim_unstable = du;
    out.unstable_basis = dominant_subspace(A.mat(), du);
    out.stable_basis = dominant_subspace(A.inv(), ds);

    // P_u projects onto E^u along E^s: [B_s B_u] coordinates.
    MatX B(d, d);
    B.leftCols(ds) = out.stable_basis;
    B.rightCols(du) = out.unstable_basis;
    MatX Binv = B.inverse();
    MatX Du = MatX::Zero(d, d);
    for (int i = ds; i < d; ++i) Du(i, i) = 1.0;
    out.unstable_projector = B * Du * Binv;
    out.stable_projector = MatX::Identity(d, d) - out.unstable_projector;

    const int n = 60;
    out.contraction_rate = restricted_power_rate(A.mat(), out.stable_basis, n);
    out.expansion_rate = 1.0 / restricted_power_rate(A.inv(), out.unstable_basis, n);
    return out;
}

LinearPart paper_matrix() {
    return LinearPart({{0, 0, 0, -1},
                       {1, 0, 0, -1},
                       {0, 1, 0, 10},
                       {0, 0, 1, 10}});
}

LinearPart cat_matrix() {
    return LinearPart({{2, 1}, {1, 1}});
}

LinearPart linear_from_json_rows(const std::vector<std::vector<long long>>& rows) {
    return LinearPart(rows);
}

}  // namespace dalab
