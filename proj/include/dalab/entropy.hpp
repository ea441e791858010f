#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dalab/common.hpp"
#include "dalab/kernels.hpp"
#include "dalab/maps.hpp"
#include "dalab/semiconjugacy.hpp"
#include "dalab/torus.hpp"

namespace dalab {

struct BowenRow {
    int n = 0;
    double eps = 0.0;
    std::int64_t separated = 0;
    std::int64_t spanning = 0;
    std::int64_t sample_size = 0;
    bool flagged = false;  // separated set saturates the sample; excluded from fits
};

struct BowenCountTable {
    std::vector<BowenRow> rows;
};

struct EpsRate {
    double eps = 0.0;
    double rate = 0.0;
    int usable_rows = 0;
    int window = 0;  // rows actually used by the fit
};

struct EntropyEstimate {
    BowenCountTable table;
    std::vector<EpsRate> rates;
    double estimate = 0.0;   // max usable per-eps rate
    bool valid = false;      // at least one eps had a 2+ row window
};

struct SeparatedSet {
    std::int64_t count = 0;
    std::vector<std::int64_t> selected;  // indices into the sample, greedy order
};

/** Greedy maximal (n,eps)-separated subset of K under the dynamical metric
 *  max_{0<=i<n} dist(f^i x, f^i y), in fixed enumeration order. The result is
 *  (n,eps)-separated and (n,eps)-spans K (maximality). `seed` must be an
 *  (n,eps)-separated subset (e.g. the selection at a smaller horizon); it is
 *  kept, making counts monotone along a horizon chain.
 */
SeparatedSet separated_count(const TorusMap& f, const std::vector<TorusPoint>& K, int n,
                             double eps, int threads = 0);
SeparatedSet separated_count_seeded(const OrbitTable& tab, int n, double eps,
                                    const std::vector<std::int64_t>& seed);

// Size of a greedily built (n,eps)-spanning subset of K (first-uncovered rule,
// closed balls). Never exceeds the separated count on the same sample.
std::int64_t spanning_count(const TorusMap& f, const std::vector<TorusPoint>& K, int n,
                            double eps, int threads = 0);

// Reference O(pairs) greedy without the spatial index; for oracle tests.
SeparatedSet separated_count_bruteforce(const TorusMap& f, const std::vector<TorusPoint>& K,
                                        int n, double eps);

struct EstimateOptions {
    double saturation_fraction = 0.5;
    int threads = 0;
};

EntropyEstimate estimate_entropy(const TorusMap& f, const std::vector<TorusPoint>& sample,
                                 const std::vector<int>& n_range,
                                 const std::vector<double>& eps_list,
                                 const EstimateOptions& opt = {});

// Pure re-fit of the per-eps rates from a table (used by tests and loaders).
std::vector<EpsRate> fit_rates(const BowenCountTable& table, double saturation_fraction = 0.5);

struct FiberOptions {
    double tol = 0.02;
    VecX box_lo, box_hi;        // candidate box in lift coordinates
    std::vector<int> box_res;
    std::vector<int> n_range;
    std::vector<double> eps_list;
    EstimateOptions est;
};

struct FiberEntropy {
    std::vector<TorusPoint> members;  // the sampled class K
    EntropyEstimate estimate;
};

// Entropy estimate over the sampled class [x] = {y : dist(h(y), x) < tol}.
// Requires field.residual < tol/10.
FiberEntropy fiber_entropy(const TorusMap& f, const DisplacementField& field,
                           const TorusPoint& x, const FiberOptions& opt);

struct FiberBoundRow {
    int n;
    std::int64_t separated;
    double bound;  // n * (L / eps + 1)
};

struct FiberBoundReport {
    double L = 0.0;  // max iterate diameter of the sampled class over the range
    double eps = 0.0;
    std::vector<FiberBoundRow> rows;
    bool pass = false;
};

// Interval bound on a sampled class: log s(n,eps,K) <= log(n (L/eps + 1)) for
// n = 1..n_max, with L the measured iterate-diameter bound.
FiberBoundReport fiber_interval_bound(const TorusMap& f, const std::vector<TorusPoint>& members,
                                      int n_max, double eps, int threads = 0);

struct JumpOptions {
    double radial_offset = 0.0;  // 0: fold plane; 1: the linear (t=1) shell
    int edge_samples = 600;
    int fiber_samples = 160;
    int chart_points = 4000;
    int directions = 64;
    double aperture = 0.2;
    std::uint64_t seed = 2024;
    int threads = 0;
};

struct JumpCertificate {
    bool markov_verified = false;
    double fiber_rate = 0.0;        // log 2 once the crossing is verified
    double mu_min = 0.0;            // min one-step unstable-cone expansion, chart samples
    std::optional<double> certified_lower_bound;  // log 2 + log mu_min
    double crossing_margin = 0.0;   // worst clearance over all crossing checks
    double min_fiber_expansion = 0.0;
    std::string refusal;            // empty when verified
    Vec2 witness = Vec2::Zero();
};

/** Certificate for the entropy jump: (a) the map's center-plane action folds
 *  R0, R1 fully across both rectangles (dense edge sampling), (b) unstable
 *  cone vectors expand by at least mu_min at sampled chart points. Works on
 *  any 4d map given the chart frame; the linear part fails (a).
 */
JumpCertificate certify_jump(const TorusMap& f, const MatX& frame, const MatX& frame_inv,
                             double delta, const HorseshoeIsotopy& iso, const JumpOptions& opt = {});
JumpCertificate certify_jump(const T4Example& ex, const JumpOptions& opt = {});

struct BowenReport {
    double estimate_f = 0.0;
    double linear_entropy_A = 0.0;
    double max_fiber_rate = 0.0;
    double difference = 0.0;  // estimate_f - (h(A) + fiber)
    double slack = 0.2;
    bool pass = false;
};

BowenReport bowen_inequality_check(double estimate_f, double linear_entropy_A,
                                   double max_fiber_rate, double slack = 0.2);

struct CoverageRow {
    std::int64_t step;
    std::int64_t visited;
    double fraction;
};

struct CoverageCurve {
    int resolution = 0;
    std::int64_t boxes = 0;
    std::vector<CoverageRow> rows;
};

// Fraction of dyadic boxes (resolution per axis) visited by the orbit of x0,
// recorded at evenly spaced checkpoints; nondecreasing by construction.
CoverageCurve transitivity_scan(const TorusMap& f, const TorusPoint& x0, std::int64_t iterations,
                                int resolution, int checkpoints = 50);

}  // namespace dalab
