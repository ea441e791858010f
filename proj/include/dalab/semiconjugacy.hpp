#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "dalab/common.hpp"
#include "dalab/linear.hpp"
#include "dalab/maps.hpp"
#include "dalab/torus.hpp"

namespace dalab {

/** Periodic displacement u with h = Id + u solving h f = A h.
 *
 *  Two storage modes share one evaluation interface:
 *
 *  - grid: full-torus nodes with periodic interpolation (multilinear or
 *    Catmull-Rom cubic), optionally refined by a finer box-local level
 *    blended in over a margin band. Solved by the split fixed-point
 *    iteration. The right tool when u has summable derivatives (T^2 maps).
 *
 *  - series: direct evaluation of the split Duhamel sums
 *        u_u(x) =  sum_{k>=0} A^{-(k+1)} P_u p(F^k x)
 *        u_s(x) = -sum_{k>=0} A^{ k    } P_s p(F^{-k-1} x)
 *    truncated at a fixed depth. Exact up to the geometric truncation tail,
 *    grid-free; the right tool when u is too rough to interpolate (the T^4
 *    example's field is barely Hoelder, its stable sum gains roughness
 *    lambda_s / lambda_sss per term).
 */
enum class InterpOrder { Linear, Cubic };

struct GridLevel {
    std::vector<int> res;       // nodes per axis
    VecX lo, hi;                // box corners; the full-torus level has lo=0, hi=1
    bool periodic = true;
    std::vector<double> us;     // stable component, node-major, d doubles per node
    std::vector<double> uu;     // unstable component

    std::int64_t nodes() const;
    VecX spacing() const;
};

struct SeriesEval {
    std::shared_ptr<const TorusMap> map;
    int stable_terms = 80;
    int unstable_terms = 12;
    MatX Ps, Pu;
};

struct DisplacementField {
    int d = 0;
    GridLevel coarse;
    std::optional<GridLevel> fine;
    std::optional<SeriesEval> series;
    InterpOrder interp = InterpOrder::Linear;
    double residual = 0.0;        // sup |A u(x) - p(x) - u(F x)| over the test sample
    int iterations = 0;
    bool flagged = false;         // residual target not reached
    double sup_u = 0.0;           // measured ||u||_inf
    double a_priori_bound = 0.0;  // contraction-mapping bound from ||p||, rates
    std::vector<double> residual_history;

    VecX eval_u(const TorusPoint& x) const;
};

struct FranksOptions {
    std::vector<int> coarse_res;          // required
    std::optional<std::vector<int>> fine_res;
    VecX fine_lo, fine_hi;                // used when fine_res is present
    InterpOrder interp = InterpOrder::Cubic;
    int max_iter = 200;
    double tol_residual = 1e-6;
    int residual_sample = 2000;
    std::uint64_t seed = 12345;
    int threads = 0;
};

DisplacementField solve_franks(const TorusMap& f, const FranksOptions& opt);

struct SeriesOptions {
    int stable_terms = 120;
    int unstable_terms = 14;
    int residual_sample = 500;
    int sup_sample = 4000;
    std::uint64_t seed = 4242;
    int threads = 0;
};

// grid-free field backed by the truncated split sums; f must outlive copies
// of the returned field only through the shared_ptr it stores
DisplacementField series_field(std::shared_ptr<const TorusMap> f, const SeriesOptions& opt = {});

TorusPoint evaluate_h(const DisplacementField& field, const TorusPoint& x);
LiftPoint evaluate_h_lift(const DisplacementField& field, const LiftPoint& x);

/** Sampled pre-image class [x] = h^{-1}(x): candidate-grid points whose
 *  h-image lies within tol of x, each refined along the unstable directions
 *  so the h-defect is far below tol (keeps forward iterates of the sample
 *  from outrunning the true class).
 */
struct PreimageClass {
    TorusPoint base;
    std::vector<TorusPoint> members;
    double diameter = 0.0;
    std::vector<double> iterate_diameters;  // index n + n_range for n in [-n_range, n_range]
    int n_range = 0;
};

struct ClassOptions {
    double tol = 0.0;              // 0: default 2 * coarse spacing
    VecX box_lo, box_hi;           // candidate box (lift coordinates around base)
    std::vector<int> box_res;
    int n_range = 10;
    bool refine_unstable = true;
    std::size_t max_members = 20000;
    int threads = 0;
};

PreimageClass preimage_class(const DisplacementField& field, const TorusMap& f,
                             const TorusPoint& x, const ClassOptions& opt);

// Fraction of the class point cloud's variance lying in the span of the given
// ambient directions (orthonormalized internally). Singleton -> 1.
double class_center_alignment(const PreimageClass& cls, const MatX& center_dirs);

}  // namespace dalab
