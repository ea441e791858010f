#pragma once

#include <vector>

#include "dalab/common.hpp"

namespace dalab {

/** C^2 scalar profile assembled from constant-slope plateaus joined by
 *  quintic-smoothstep slope transitions. Evaluation is closed form per
 *  segment; the value accumulates from 0 at the left end.
 */
class SlopeProfile {
public:
    // transition: slope s0 -> s1 over [x0, x0+width]
    void push(double x0, double width, double s0, double s1);
    // constant slope over [x0, x0+width]
    void plateau(double x0, double width, double s);

    double value(double x) const;
    double deriv(double x) const;

    double left() const { return segs_.empty() ? 0.0 : segs_.front().x0; }
    double right() const { return x_end_; }
    double final_value() const { return f_end_; }

private:
    struct Seg {
        double x0, x1, s0, s1, f0;
    };
    std::vector<Seg> segs_;
    double x_end_ = 0.0;
    double f_end_ = 0.0;
};

}  // namespace dalab
