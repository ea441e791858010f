#pragma once

#include <optional>
#include <vector>

#include "dalab/common.hpp"
#include "dalab/linear.hpp"
#include "dalab/maps.hpp"
#include "dalab/torus.hpp"

namespace dalab {

enum class ConeKind { Stable, Unstable };

/** Constant-coefficient cone field in the eigen-split frame of the linear
 *  part: cone = { v : ||w_co|| <= aperture * ||w_core|| } with w = Q^{-1} v.
 *  The core block is the stable (resp. unstable) coordinate range; everything
 *  else, center included, is the complement. Components in this frame are the
 *  oblique projections onto the splitting, so for the linear map itself the
 *  invariance margins reduce to spectral gaps.
 */
struct ConeField {
    ConeKind kind;
    MatX frame;      // columns: eigen-split basis, moduli ascending
    MatX frame_inv;
    int core_offset = 0;
    int core_dim = 0;
    double aperture = 1.0;

    int dim() const { return static_cast<int>(frame.rows()); }
};

ConeField make_unstable_cone(const LinearPart& A, double aperture = 1.0);
// core_dim 0 selects every contracting direction.
ConeField make_stable_cone(const LinearPart& A, double aperture = 1.0, int core_dim = 0);

struct ConeCheck {
    ConeKind kind;
    double aperture = 0.0;
    double margin = 0.0;       // min angular clearance of image vectors, radians
    double mu_min = 0.0;       // unstable: min one-step expansion (frame norm)
    double lambda_max = 0.0;   // stable: max one-step forward contraction
    bool pass = false;
    bool has_witness = false;
    TorusPoint witness;
    VecX witness_dir;
};

struct HyperbolicityCertificate {
    std::vector<ConeCheck> checks;
    std::int64_t samples = 0;
    int directions = 0;
    bool pass = false;
};

/** Strict cone invariance at sampled points: for the unstable cone the image
 *  D f_q v of every sampled boundary/interior vector must lie in the cone with
 *  positive angular margin; the stable cone is checked with the inverse
 *  Jacobian. Rates mu_min / lambda_max come from the same sweep.
 */
HyperbolicityCertificate check_cone_invariance(const TorusMap& f,
                                               const std::vector<ConeField>& cones,
                                               const std::vector<TorusPoint>& samples,
                                               int directions_per_point = 64,
                                               int threads = 0);

// Minimal one-step expansion of unstable-cone vectors over the samples.
double min_cone_expansion(const TorusMap& f, const ConeField& ucone,
                          const std::vector<TorusPoint>& samples, int directions_per_point,
                          int threads = 0);

struct EmpiricalRates {
    double lambda_s = 0.0;  // per-step contraction (max over sampled orbits)
    double lambda_u = 0.0;  // per-step expansion (min over sampled orbits)
};

// n-step geometric means of cone-vector growth along sampled orbits.
EmpiricalRates empirical_rates(const TorusMap& f, const ConeField& ucone,
                               const ConeField& scone, const std::vector<TorusPoint>& samples,
                               int n, int threads = 0);

}  // namespace dalab
