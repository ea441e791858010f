#include "dalab/profile.hpp"

namespace dalab {

namespace {

// integral of smoothstep5 over [0, s], s in [0, 1]
double smoothstep5_int(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 0.5 + (s - 1.0);
    double s4 = s * s * s * s;
    return s4 * (2.5 - 3.0 * s + s * s);
}

}  // namespace

void SlopeProfile::push(double x0, double width, double s0, double s1) {
    Seg sg{x0, x0 + width, s0, s1, f_end_};
    segs_.push_back(sg);
    f_end_ += s0 * width + (s1 - s0) * width * 0.5;
    x_end_ = sg.x1;
}

void SlopeProfile::plateau(double x0, double width, double s) {
    Seg sg{x0, x0 + width, s, s, f_end_};
    segs_.push_back(sg);
    f_end_ += s * width;
    x_end_ = sg.x1;
}

double SlopeProfile::value(double x) const {
    if (segs_.empty() || x <= segs_.front().x0) return 0.0;
    if (x >= x_end_) return f_end_;
    for (const auto& sg : segs_) {
        if (x < sg.x1) {
            double w = sg.x1 - sg.x0;
            double s = (x - sg.x0) / w;
            return sg.f0 + sg.s0 * (x - sg.x0) + (sg.s1 - sg.s0) * w * smoothstep5_int(s);
        }
    }
    return f_end_;
}

double SlopeProfile::deriv(double x) const {
    if (segs_.empty() || x < segs_.front().x0 || x >= x_end_) return 0.0;
    for (const auto& sg : segs_) {
        if (x < sg.x1) {
            double w = sg.x1 - sg.x0;
            return sg.s0 + (sg.s1 - sg.s0) * smoothstep5((x - sg.x0) / w);
        }
    }
    return 0.0;
}

}  // namespace dalab
