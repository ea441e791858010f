#pragma once

#include <memory>
#include <string>

#include "dalab/common.hpp"
#include "dalab/horseshoe.hpp"
#include "dalab/linear.hpp"
#include "dalab/profile.hpp"
#include "dalab/torus.hpp"

namespace dalab {

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 60;
};

/** Diffeomorphism of T^d given by its lift F(x) = A x + p(x mod 1), with p
 *  Z^d-periodic by construction. Subclasses supply the displacement and its
 *  Jacobian; equivariance F(x + k) = F(x) + A k is automatic.
 */
class TorusMap {
public:
    explicit TorusMap(LinearPart A) : A_(std::move(A)) {}
    virtual ~TorusMap() = default;

    int dim() const { return A_.dim(); }
    const LinearPart& linear_part() const { return A_; }

    // displacement and its Jacobian, as functions on the torus
    virtual VecX displacement(const TorusPoint& x) const = 0;
    virtual MatX displacement_jacobian(const TorusPoint& x) const = 0;

    LiftPoint apply_lift(const LiftPoint& x) const;
    TorusPoint apply(const TorusPoint& x) const;
    MatX jacobian(const TorusPoint& x) const;

    // Newton inverse of the lift; initial guess A^{-1} y.
    LiftPoint invert_lift(const LiftPoint& y, const NewtonOptions& opt = {}) const;
    TorusPoint invert(const TorusPoint& y, const NewtonOptions& opt = {}) const;

    virtual std::string name() const { return "torus-map"; }

private:
    LinearPart A_;
};

// p == 0: the automorphism itself.
class LinearTorusMap : public TorusMap {
public:
    explicit LinearTorusMap(LinearPart A) : TorusMap(std::move(A)) {}
    VecX displacement(const TorusPoint&) const override;
    MatX displacement_jacobian(const TorusPoint&) const override;
    std::string name() const override { return "linear"; }
};

/** Mane-type deformation of the cat map: the fixed point's weak (stable)
 *  multiplier is moved from lambda_s to mu by a displacement acting along the
 *  stable eigendirection, supported in B(0, r).
 */
class ManeMap : public TorusMap {
public:
    ManeMap(double r, double mu);

    VecX displacement(const TorusPoint& x) const override;
    MatX displacement_jacobian(const TorusPoint& x) const override;
    std::string name() const override { return "mane-t2"; }

    double bump_radius() const { return r_; }
    double mu() const { return mu_; }
    Vec2 stable_dir() const { return vs_; }
    Vec2 unstable_dir() const { return vu_; }

private:
    // displacement = amp * S(<x,vs>) * B(<x,vu>) * vs on the centered lift
    double ramp_S(double s) const;        // odd saturating ramp, S'(0)=1
    double ramp_S_deriv(double s) const;
    double bump_B(double s) const;        // 1 at 0, 0 beyond r_eff
    double bump_B_deriv(double s) const;

    double r_;
    double mu_;
    double amp_;
    double r_eff_;
    Vec2 vs_, vu_;
    SlopeProfile ramp_;
};

/** The T^4 example: linear part = companion matrix of x^4 - 10x^3 - 10x^2 + x + 1,
 *  deformed around the fixed point 0 in the real-eigenbasis chart by
 *
 *    (x1, z, x4) -> (l_sss x1, C(x1, x4; z), l_u x4),   z = (x2, x3),
 *
 *  where C runs the horseshoe isotopy at radial time t = clamp((x1^2+x4^2)/delta^2, 0, 1)
 *  at fixed fold scale delta, and its linear factor is bridged from the
 *  conformal lambda_ws (inside the t<=1 tube) to A's true center block
 *  (outside the 2delta cube) along a polar-decomposition path, so the
 *  displacement vanishes identically outside the chart cube.
 */
class T4Map : public TorusMap {
public:
    T4Map(double delta, HorseshoeIsotopy iso);

    VecX displacement(const TorusPoint& x) const override;
    MatX displacement_jacobian(const TorusPoint& x) const override;
    std::string name() const override { return "t4-example"; }

    double delta() const { return delta_; }
    const HorseshoeIsotopy& isotopy() const { return iso_; }
    const MatX& frame() const { return V_; }          // columns: sss | c1 c2 | u
    const MatX& frame_inv() const { return Vinv_; }
    const Mat2& center_block() const { return Ac_; }  // A in chart coords, center plane
    double lambda_sss() const { return l_sss_; }
    double lambda_u() const { return l_u_; }

    // chart map and its 4x4 Jacobian (chart coordinates -> chart coordinates)
    Eigen::Vector4d chart_map(const Eigen::Vector4d& xi) const;
    Eigen::Matrix4d chart_jacobian(const Eigen::Vector4d& xi) const;

    // linear factor of the center block at chart position (polar-path blend)
    Mat2 center_linear(const Eigen::Vector4d& xi) const;

private:
    double blend_sigma(const Eigen::Vector4d& xi) const;

    double delta_;
    HorseshoeIsotopy iso_;
    MatX V_, Vinv_;
    Mat2 Ac_;
    double l_sss_, l_u_;

    // polar data of the blend endpoints
    double theta_ws_, theta_A_;
    Mat2 P_A_;  // symmetric positive factor of Ac
};

struct T4Example {
    double delta;
    HorseshoeIsotopy isotopy;
    std::shared_ptr<T4Map> map;
};

std::shared_ptr<ManeMap> build_mane_t2(double r, double mu);
T4Example build_t4_example(double delta, HorseshoeIsotopy iso = HorseshoeIsotopy());

}  // namespace dalab
