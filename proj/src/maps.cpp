#include "dalab/maps.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>

namespace dalab {

namespace {

// representative of x in [-1/2, 1/2)^d (lift nearest to 0)
VecX centered_rep(const TorusPoint& x) {
    VecX r = x.c;
    for (int i = 0; i < r.size(); ++i)
        if (r[i] >= 0.5) r[i] -= 1.0;
    return r;
}

Mat2 rotation(double a) {
    Mat2 R;
    R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return R;
}

}  // namespace

LiftPoint TorusMap::apply_lift(const LiftPoint& x) const {
    LiftPoint out;
    out.c = A_.mat() * x.c + displacement(project(x));
    return out;
}

TorusPoint TorusMap::apply(const TorusPoint& x) const {
    return project(apply_lift(LiftPoint{x.c}));
}

MatX TorusMap::jacobian(const TorusPoint& x) const {
    return A_.mat() + displacement_jacobian(x);
}

LiftPoint TorusMap::invert_lift(const LiftPoint& y, const NewtonOptions& opt) const {
    LiftPoint x;
    x.c = A_.inv() * y.c;
    double res = 0.0;
    for (int it = 0; it < opt.max_iter; ++it) {
        VecX r = apply_lift(x).c - y.c;
        res = r.norm();
        if (res < opt.tol) return x;
        MatX J = jacobian(project(x));
        x.c -= J.partialPivLu().solve(r);
    }
    VecX r = apply_lift(x).c - y.c;
    res = r.norm();
    if (res < opt.tol) return x;
    throw NumericalError("invert_lift: Newton did not converge, residual " + std::to_string(res));
}

TorusPoint TorusMap::invert(const TorusPoint& y, const NewtonOptions& opt) const {
    return project(invert_lift(LiftPoint{y.c}, opt));
}

VecX LinearTorusMap::displacement(const TorusPoint&) const {
    return VecX::Zero(dim());
}

MatX LinearTorusMap::displacement_jacobian(const TorusPoint&) const {
    return MatX::Zero(dim(), dim());
}

// ---------------------------------------------------------------------------
// Mane-type T^2 map

ManeMap::ManeMap(double r, double mu) : TorusMap(cat_matrix()), r_(r), mu_(mu) {
    if (!(r > 0.0 && r < 0.25))
        throw Error("ManeMap: bump radius must lie in (0, 1/4)");
    const double ls = (3.0 - std::sqrt(5.0)) / 2.0;
    if (!(mu > ls && mu < 1.9))
        throw Error("ManeMap: mu must lie in (lambda_s, 1.9)");
    amp_ = mu - ls;
    r_eff_ = r / std::sqrt(2.0);  // square support inscribed in B(0, r)
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    vu_ = Vec2(phi, 1.0).normalized();
    vs_ = Vec2(-1.0, phi).normalized();

    // saturating odd ramp (in units of r_eff): derivative 1 at the origin,
    // flat at level 0.08, a gentle counter-slope returning to 0 by 1. The
    // counter-slope is capped so det Df stays positive and the unstable cone
    // stays invariant for every mu in range.
    const double down = -0.08 / 0.375;
    ramp_.plateau(0.0, 0.04, 1.0);
    ramp_.push(0.04, 0.08, 1.0, 0.0);
    ramp_.plateau(0.12, 0.43, 0.0);
    ramp_.push(0.55, 0.10, 0.0, down);
    ramp_.plateau(0.65, 0.30, down);
    ramp_.push(0.95, 0.05, down, 0.0);
}

// odd ramp: S(s) = sign(s) * r_eff * P(|s|/r_eff)
double ManeMap::ramp_S(double s) const {
    double a = std::abs(s) / r_eff_;
    double v = r_eff_ * ramp_.value(a);
    return s >= 0.0 ? v : -v;
}

double ManeMap::ramp_S_deriv(double s) const {
    return ramp_.deriv(std::abs(s) / r_eff_);
}

double ManeMap::bump_B(double s) const {
    return plateau_bump(s / r_eff_, 1.0 / 3.0, 1.0);
}

double ManeMap::bump_B_deriv(double s) const {
    return plateau_bump_deriv(s / r_eff_, 1.0 / 3.0, 1.0) / r_eff_;
}

VecX ManeMap::displacement(const TorusPoint& x) const {
    VecX c = centered_rep(x);
    double s = c[0] * vs_[0] + c[1] * vs_[1];
    double u = c[0] * vu_[0] + c[1] * vu_[1];
    double beta = amp_ * ramp_S(s) * bump_B(u);
    VecX out(2);
    out << beta * vs_[0], beta * vs_[1];
    return out;
}

MatX ManeMap::displacement_jacobian(const TorusPoint& x) const {
    VecX c = centered_rep(x);
    double s = c[0] * vs_[0] + c[1] * vs_[1];
    double u = c[0] * vu_[0] + c[1] * vu_[1];
    double dbds = amp_ * ramp_S_deriv(s) * bump_B(u);
    double dbdu = amp_ * ramp_S(s) * bump_B_deriv(u);
    // grad beta = dbds * vs + dbdu * vu ; Dp = vs * grad^T
    MatX J(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            J(i, j) = vs_[i] * (dbds * vs_[j] + dbdu * vu_[j]);
    return J;
}

// ---------------------------------------------------------------------------
// T^4 example

T4Map::T4Map(double delta, HorseshoeIsotopy iso)
    : TorusMap(paper_matrix()), delta_(delta), iso_(std::move(iso)) {
    if (!(delta > 0.0 && delta < 0.25))
        throw Error("T4Map: delta must lie in (0, 1/4)");

    // real eigenbasis, orthonormalized per block: sss | (ss,s) plane | u
    Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(linear_part().mat()), true);
    Eigen::Vector4cd ev = es.eigenvalues();
    // indices sorted by modulus: sss, ss, s, u
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(ev[a]) < std::abs(ev[b]);
    });
    auto real_vec = [&](int k) {
        Eigen::Vector4d v = es.eigenvectors().col(k).real();
        return v.normalized();
    };
    Eigen::Vector4d v_sss = real_vec(order[0]);
    Eigen::Vector4d v_ss = real_vec(order[1]);
    Eigen::Vector4d v_s = real_vec(order[2]);
    Eigen::Vector4d v_u = real_vec(order[3]);

    // Gram-Schmidt inside the center plane
    Eigen::Vector4d c1 = v_ss;
    Eigen::Vector4d c2 = (v_s - v_s.dot(c1) * c1).normalized();

    V_ = MatX(4, 4);
    V_.col(0) = v_sss;
    V_.col(1) = c1;
    V_.col(2) = c2;
    V_.col(3) = v_u;
    Vinv_ = V_.inverse();

    MatX Achart = Vinv_ * linear_part().mat() * V_;
    Ac_ = Achart.block<2, 2>(1, 1);
    l_sss_ = Achart(0, 0);
    l_u_ = Achart(3, 3);

    // polar data of the blend: lambda_ws = m R(theta_ws); Ac = R(theta_A) P_A
    theta_ws_ = iso_.angle();
    Eigen::SelfAdjointEigenSolver<Mat2> sa(Ac_.transpose() * Ac_);
    Mat2 sqrtAtA = sa.operatorSqrt();
    P_A_ = sqrtAtA;
    Mat2 R_A = Ac_ * P_A_.inverse();
    theta_A_ = std::atan2(R_A(1, 0), R_A(0, 0));
    // shorter arc
    double diff = theta_A_ - theta_ws_;
    while (diff > M_PI) diff -= 2.0 * M_PI;
    while (diff < -M_PI) diff += 2.0 * M_PI;
    theta_A_ = theta_ws_ + diff;

    // the chart cube (support of the displacement) must embed in T^4
    double ext = 0.0;
    for (int i = 0; i < 4; ++i) {
        double row = 0.0;
        for (int j = 0; j < 4; ++j) row += std::abs(V_(i, j));
        ext = std::max(ext, row * 2.0 * delta_);
    }
    if (ext >= 0.5)
        throw Error("T4Map: chart cube does not embed (delta too large)");
}

double T4Map::blend_sigma(const Eigen::Vector4d& xi) const {
    double tt = (xi[0] * xi[0] + xi[3] * xi[3]) / (delta_ * delta_);
    double zn = std::hypot(xi[1], xi[2]) / delta_;
    double st = smoothstep5((tt - 1.0) / 3.0);   // 0 inside the t<=1 tube, 1 at radius 2 delta
    double sz = smoothstep5(zn - 1.0);           // 0 for |z| <= delta, 1 beyond 2 delta
    return 1.0 - (1.0 - st) * (1.0 - sz);
}

Mat2 T4Map::center_linear(const Eigen::Vector4d& xi) const {
    double sig = blend_sigma(xi);
    if (sig <= 0.0) return iso_.lambda_ws();
    if (sig >= 1.0) return Ac_;
    double th = (1.0 - sig) * theta_ws_ + sig * theta_A_;
    Mat2 P = (1.0 - sig) * (iso_.modulus() * Mat2::Identity()) + sig * P_A_;
    return rotation(th) * P;
}

Eigen::Vector4d T4Map::chart_map(const Eigen::Vector4d& xi) const {
    double tt = (xi[0] * xi[0] + xi[3] * xi[3]) / (delta_ * delta_);
    double t = std::min(tt, 1.0);
    Vec2 z(xi[1], xi[2]);

    // nonlinear fold at fixed scale delta, active only for t < 1/2
    Vec2 zn = z / delta_;
    Vec2 fold = Vec2::Zero();
    if (t < 0.5 && zn.norm() < 0.5) {
        fold = delta_ * (iso_.eval(t, zn) - iso_.lambda_ws() * zn);
    }
    Vec2 cz = center_linear(xi) * z + fold;
    return Eigen::Vector4d(l_sss_ * xi[0], cz[0], cz[1], l_u_ * xi[3]);
}

Eigen::Matrix4d T4Map::chart_jacobian(const Eigen::Vector4d& xi) const {
    Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
    J(0, 0) = l_sss_;
    J(3, 3) = l_u_;

    const double d2 = delta_ * delta_;
    double tt = (xi[0] * xi[0] + xi[3] * xi[3]) / d2;
    double t = std::min(tt, 1.0);
    Vec2 z(xi[1], xi[2]);
    Vec2 zn = z / delta_;

    // linear factor and its derivative through the blend parameter
    double st_arg = (tt - 1.0) / 3.0;
    double zn_norm = zn.norm();
    double st = smoothstep5(st_arg);
    double sz = smoothstep5(zn_norm - 1.0);
    double sig = 1.0 - (1.0 - st) * (1.0 - sz);

    Mat2 L;
    Mat2 dL_dsig = Mat2::Zero();
    if (sig <= 0.0) {
        L = iso_.lambda_ws();
    } else if (sig >= 1.0) {
        L = Ac_;
    } else {
        double th = (1.0 - sig) * theta_ws_ + sig * theta_A_;
        Mat2 P = (1.0 - sig) * (iso_.modulus() * Mat2::Identity()) + sig * P_A_;
        Mat2 R = rotation(th);
        Mat2 dR;
        dR << -std::sin(th), -std::cos(th), std::cos(th), -std::sin(th);
        L = R * P;
        dL_dsig = (theta_A_ - theta_ws_) * dR * P + R * (P_A_ - iso_.modulus() * Mat2::Identity());
    }

    // center block on z
    Mat2 Cz = L;
    Vec2 dC_dt = Vec2::Zero();
    if (t < 0.5 && zn_norm < 0.5) {
        Mat2 Dfold = iso_.jacobian(t, zn) - iso_.lambda_ws();
        Cz += Dfold;  // d(delta * fold(z/delta))/dz = Dfold(z/delta)
        dC_dt = delta_ * iso_.time_deriv(t, zn);
    }
    J(1, 1) = Cz(0, 0);
    J(1, 2) = Cz(0, 1);
    J(2, 1) = Cz(1, 0);
    J(2, 2) = Cz(1, 1);

    // dependence of sigma on z through sz
    if (sig > 0.0 && sig < 1.0 && zn_norm > 1e-14) {
        double dsz = smoothstep5_deriv(zn_norm - 1.0);
        Vec2 dzn_dz = zn / (zn_norm * delta_);
        Vec2 dsig_dz = (1.0 - st) * dsz * dzn_dz;
        Vec2 Lz = dL_dsig * z;
        J(1, 1) += Lz[0] * dsig_dz[0];
        J(1, 2) += Lz[0] * dsig_dz[1];
        J(2, 1) += Lz[1] * dsig_dz[0];
        J(2, 2) += Lz[1] * dsig_dz[1];
    }

    // dependence on (x1, x4) through t (fold) and through st (blend)
    double dt_dx1 = 0.0, dt_dx4 = 0.0;
    if (tt < 1.0) {
        dt_dx1 = 2.0 * xi[0] / d2;
        dt_dx4 = 2.0 * xi[3] / d2;
    }
    if (t < 0.5 && zn_norm < 0.5) {
        J(1, 0) += dC_dt[0] * dt_dx1;
        J(2, 0) += dC_dt[1] * dt_dx1;
        J(1, 3) += dC_dt[0] * dt_dx4;
        J(2, 3) += dC_dt[1] * dt_dx4;
    }
    if (sig > 0.0 && sig < 1.0) {
        double dst = smoothstep5_deriv(st_arg) / 3.0;
        double dtt_dx1 = 2.0 * xi[0] / d2;
        double dtt_dx4 = 2.0 * xi[3] / d2;
        double dsig_dx1 = (1.0 - sz) * dst * dtt_dx1;
        double dsig_dx4 = (1.0 - sz) * dst * dtt_dx4;
        Vec2 Lz = dL_dsig * z;
        J(1, 0) += Lz[0] * dsig_dx1;
        J(2, 0) += Lz[1] * dsig_dx1;
        J(1, 3) += Lz[0] * dsig_dx4;
        J(2, 3) += Lz[1] * dsig_dx4;
    }
    return J;
}

VecX T4Map::displacement(const TorusPoint& x) const {
    VecX c = centered_rep(x);
    Eigen::Vector4d xi = Vinv_ * Eigen::Vector4d(c[0], c[1], c[2], c[3]);
    if (xi.cwiseAbs().maxCoeff() >= 2.0 * delta_) return VecX::Zero(4);
    Eigen::Vector4d Achart_xi(l_sss_ * xi[0], 0, 0, l_u_ * xi[3]);
    Eigen::Vector4d Az = Eigen::Vector4d::Zero();
    Az.segment<2>(1) = Ac_ * xi.segment<2>(1);
    Eigen::Vector4d diff = chart_map(xi) - (Achart_xi + Az);
    Eigen::Vector4d p = V_ * diff;
    VecX out(4);
    out << p[0], p[1], p[2], p[3];
    return out;
}

MatX T4Map::displacement_jacobian(const TorusPoint& x) const {
    VecX c = centered_rep(x);
    Eigen::Vector4d xi = Vinv_ * Eigen::Vector4d(c[0], c[1], c[2], c[3]);
    if (xi.cwiseAbs().maxCoeff() >= 2.0 * delta_) return MatX::Zero(4, 4);
    Eigen::Matrix4d Achart = Eigen::Matrix4d::Zero();
    Achart(0, 0) = l_sss_;
    Achart(3, 3) = l_u_;
    Achart.block<2, 2>(1, 1) = Ac_;
    Eigen::Matrix4d D = V_ * (chart_jacobian(xi) - Achart) * Vinv_;
    MatX out(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = D(i, j);
    return out;
}

std::shared_ptr<ManeMap> build_mane_t2(double r, double mu) {
    return std::make_shared<ManeMap>(r, mu);
}

T4Example build_t4_example(double delta, HorseshoeIsotopy iso) {
    T4Example ex;
    ex.delta = delta;
    ex.isotopy = iso;
    ex.map = std::make_shared<T4Map>(delta, std::move(iso));
    return ex;
}

}  // namespace dalab
