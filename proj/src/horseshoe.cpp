#include "dalab/horseshoe.hpp"

#include <cmath>

#include "dalab/profile.hpp"

namespace dalab {

double HorseshoeIsotopy::ramp(double t) {
    return 1.0 - smoothstep5(t / 0.5);
}

double HorseshoeIsotopy::ramp_deriv(double t) {
    return -smoothstep5_deriv(t / 0.5) / 0.5;
}

HorseshoeIsotopy::HorseshoeIsotopy() : HorseshoeIsotopy(0.5, 1.5 * M_PI) {}

HorseshoeIsotopy::HorseshoeIsotopy(double modulus, double angle)
    : modulus_(modulus), angle_(angle) {
    if (modulus <= 0.0 || modulus >= 1.0)
        throw Error("HorseshoeIsotopy: contraction modulus must be in (0,1)");
    lws_ << modulus * std::cos(angle), -modulus * std::sin(angle),
            modulus * std::sin(angle),  modulus * std::cos(angle);
    build();
}

void HorseshoeIsotopy::build() {
    // Fold geometry, frozen. Lengths are unit-disc coordinates. The slope cap
    // S keeps ||Dh|| = modulus * sqrt(S^2 + 1 + eps) under 3; the branch width
    // gives the image strips enough travel to clear both rectangles plus the
    // conformal y-mixing (modulus * window height).
    const double S = 5.75;
    const double r0 = 0.0035;    // dead zone around 0 (conformal derivative at p)
    const double w_in = 0.0025;  // ramp 0 -> S
    const double branch = 0.032;
    const double T = 0.0015;     // turn +S -> -S
    const double w_out = 0.0025;

    const double a1 = r0 + w_in;
    const double a2 = a1 + branch;
    const double a3 = a2 + T;
    const double a4 = a3 + branch;

    profile_.push(r0, w_in, 0.0, S);
    profile_.plateau(a1, branch, S);
    profile_.push(a2, T, S, -S);
    profile_.plateau(a3, branch, -S);
    profile_.push(a4, w_out, -S, 0.0);

    // close the profile back to exactly zero with a gentle counter-slope
    double x5 = profile_.right();
    double residual = profile_.final_value();
    const double w_r = 0.01, w_p = 0.04;
    double sr = -residual / (w_r + w_p);
    profile_.push(x5, w_r, 0.0, sr);
    profile_.plateau(x5 + w_r, w_p, sr);
    profile_.push(x5 + w_r + w_p, w_r, sr, 0.0);

    // y-taper: plateau over the rectangle window, long tails keep |f chi'| < 1
    const double yc = -0.019375;
    plateau_lo_ = yc - 0.022;
    plateau_hi_ = yc + 0.022;
    zero_lo_ = -0.47;
    zero_hi_ = 0.45;

    // Markov rectangles: insets of the constant-slope zones; the window holds
    // every image strip (strips sit at y' = -modulus * x, x in the zones)
    const double mJ = 0.001;
    const double y_lo = -0.03625, y_hi = -0.0025;
    rects_[0] = MarkovRect{a1 + mJ, a2 - mJ, y_lo, y_hi};
    rects_[1] = MarkovRect{a3 + mJ, a4 - mJ, y_lo, y_hi};
}

double HorseshoeIsotopy::profile(double x) const { return profile_.value(x); }
double HorseshoeIsotopy::profile_deriv(double x) const { return profile_.deriv(x); }

double HorseshoeIsotopy::taper(double y) const {
    if (y >= plateau_lo_ && y <= plateau_hi_) return 1.0;
    if (y <= zero_lo_ || y >= zero_hi_) return 0.0;
    if (y < plateau_lo_) return 1.0 - smoothstep5((plateau_lo_ - y) / (plateau_lo_ - zero_lo_));
    return 1.0 - smoothstep5((y - plateau_hi_) / (zero_hi_ - plateau_hi_));
}

double HorseshoeIsotopy::taper_deriv(double y) const {
    if (y >= plateau_lo_ && y <= plateau_hi_) return 0.0;
    if (y <= zero_lo_ || y >= zero_hi_) return 0.0;
    if (y < plateau_lo_) {
        double w = plateau_lo_ - zero_lo_;
        return smoothstep5_deriv((plateau_lo_ - y) / w) / w;
    }
    double w = zero_hi_ - plateau_hi_;
    return -smoothstep5_deriv((y - plateau_hi_) / w) / w;
}

Vec2 HorseshoeIsotopy::eval(double t, const Vec2& z) const {
    double shear = ramp(t) * profile(z.x()) * taper(z.y());
    return lws_ * Vec2(z.x(), z.y() + shear);
}

Mat2 HorseshoeIsotopy::jacobian(double t, const Vec2& z) const {
    double r = ramp(t);
    double fx = profile(z.x());
    double dfx = profile_deriv(z.x());
    double cy = taper(z.y());
    double dcy = taper_deriv(z.y());
    Mat2 shear;
    shear << 1.0, 0.0,
             r * dfx * cy, 1.0 + r * fx * dcy;
    return lws_ * shear;
}

Vec2 HorseshoeIsotopy::time_deriv(double t, const Vec2& z) const {
    double dr = ramp_deriv(t);
    return lws_ * Vec2(0.0, dr * profile(z.x()) * taper(z.y()));
}

Vec2 horseshoe_map(const HorseshoeIsotopy& iso, double t, const Vec2& z) {
    if (z.norm() > 1.0 + 1e-12)
        throw Error("horseshoe_map: point outside the unit disc");
    if (t < 0.0 || t > 1.0)
        throw Error("horseshoe_map: isotopy time outside [0,1]");
    return iso.eval(t, z);
}

Vec2 rescaled_horseshoe(const HorseshoeIsotopy& iso, double t, const Vec2& z) {
    if (t <= 0.0)
        throw Error("rescaled_horseshoe: degenerate scale t <= 0");
    if (z.norm() >= 0.5 * t) return iso.lambda_ws() * z;
    return t * iso.eval(t, z / t);
}

Mat2 rescaled_horseshoe_jacobian(const HorseshoeIsotopy& iso, double t, const Vec2& z) {
    if (t <= 0.0)
        throw Error("rescaled_horseshoe: degenerate scale t <= 0");
    if (z.norm() >= 0.5 * t) return iso.lambda_ws();
    return iso.jacobian(t, z / t);
}

}  // namespace dalab
