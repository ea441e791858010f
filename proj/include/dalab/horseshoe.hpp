#pragma once

#include <array>
#include <vector>

#include "dalab/common.hpp"
#include "dalab/profile.hpp"

namespace dalab {

// Axis-aligned rectangle in the disc coordinates of the isotopy.
struct MarkovRect {
    double x_lo, x_hi;
    double y_lo, y_hi;

    bool contains(const Vec2& z, double margin = 0.0) const {
        return z.x() >= x_lo + margin && z.x() <= x_hi - margin &&
               z.y() >= y_lo + margin && z.y() <= y_hi - margin;
    }
};

/** Isotopy {h_t : D_1 -> D_1} from a Smale horseshoe (t = 0) to the linear
 *  conformal contraction z -> lambda_ws z (t >= 1/2).
 *
 *  h_t(z) = lambda_ws * (x, y + rho(t) f(x) chi(y)), a sheared conformal map:
 *  every member of the family is a diffeomorphism because the shear is
 *  monotone along vertical lines (|f chi'| < 1 by construction).
 *
 *    - h_t = lambda_ws z outside D_{1/2} for every t (the shear profile is
 *      supported well inside the disc);
 *    - h_t(0) = 0 for every t, with Dh_t(0) = lambda_ws (no invariant line);
 *    - h_0 folds two rectangles R0, R1 fully across both (full 2-shift);
 *    - sup_{t,z} ||Dh_t|| <= 3.
 *
 *  lambda_ws = modulus * R(angle). The default angle is 3*pi/2: the fold is a
 *  vertical shear, so the conformal factor has to carry the image strips back
 *  across the rectangles' expanding axis, which pins the rotation to a
 *  quarter turn.
 */
class HorseshoeIsotopy {
public:
    HorseshoeIsotopy();  // frozen default geometry
    HorseshoeIsotopy(double modulus, double angle);

    const Mat2& lambda_ws() const { return lws_; }
    double modulus() const { return modulus_; }
    double angle() const { return angle_; }

    Vec2 eval(double t, const Vec2& z) const;
    Mat2 jacobian(double t, const Vec2& z) const;

    // Isotopy ramp: 1 at t=0, 0 for t >= 1/2, C^2.
    static double ramp(double t);
    static double ramp_deriv(double t);

    // Shear displacement along y as a function of x, and the y-taper.
    double profile(double x) const;
    double profile_deriv(double x) const;
    double taper(double y) const;
    double taper_deriv(double y) const;

    // d/dt of h_t at fixed z (used by the glued 4d map's chain rule).
    Vec2 time_deriv(double t, const Vec2& z) const;

    const MarkovRect& rect(int i) const { return rects_[i]; }

    // Half-width of the fold's support strip in x and y (inside D_{1/2}).
    double support_radius() const { return 0.499; }

private:
    void build();

    double modulus_;
    double angle_;
    Mat2 lws_;

    SlopeProfile profile_;

    // y-taper knots
    double plateau_lo_, plateau_hi_;  // chi == 1 between these
    double zero_lo_, zero_hi_;        // chi == 0 beyond these

    std::array<MarkovRect, 2> rects_;
};

// h_t(z); domain check |z| <= 1.
Vec2 horseshoe_map(const HorseshoeIsotopy& iso, double t, const Vec2& z);

// e_t^{-1} h_t e_t on D_t, extended by lambda_ws z (exact for |z| >= t/2).
// t must be positive.
Vec2 rescaled_horseshoe(const HorseshoeIsotopy& iso, double t, const Vec2& z);
Mat2 rescaled_horseshoe_jacobian(const HorseshoeIsotopy& iso, double t, const Vec2& z);

}  // namespace dalab
