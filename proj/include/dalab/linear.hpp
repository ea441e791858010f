#pragma once

#include <complex>
#include <string>
#include <vector>

#include "dalab/common.hpp"
#include "dalab/torus.hpp"

namespace dalab {

/** Integer d x d matrix acting on T^d, with its spectral data.
 *
 *  Unimodularity (|det| = 1) is required at construction; everything else
 *  (eigenvalues, invariant splitting, adapted rates) is computed lazily by
 *  the free functions below.
 */
class LinearPart {
public:
    explicit LinearPart(std::vector<std::vector<long long>> rows);

    int dim() const { return d_; }
    long long det() const { return det_; }
    const MatX& mat() const { return mat_; }
    const MatX& inv() const { return inv_; }  // exact up to roundoff; integer entries
    long long entry(int i, int j) const { return entries_[i][j]; }
    const std::vector<std::vector<long long>>& entries() const { return entries_; }

    const Eigen::VectorXcd& eigenvalues() const { return eig_; }

    // Lift action and torus action.
    LiftPoint apply_lift(const LiftPoint& x) const;
    TorusPoint apply(const TorusPoint& x) const;

private:
    int d_;
    std::vector<std::vector<long long>> entries_;
    MatX mat_;
    MatX inv_;
    long long det_;
    Eigen::VectorXcd eig_;
};

struct HyperbolicityWitness {
    bool hyperbolic = false;
    double closest_modulus_to_one = 1.0;  // the offending/critical |eigenvalue|
    double gap = 0.0;                     // min over eigenvalues of ||lambda| - 1|
};

constexpr double kDefaultHyperbolicTol = 1e-8;

HyperbolicityWitness is_hyperbolic(const LinearPart& A, double tau_hyp = kDefaultHyperbolicTol);

// Sum of log-moduli of eigenvalues outside the unit disc. Errors on
// non-hyperbolic input.
double linear_entropy(const LinearPart& A, double tau_hyp = kDefaultHyperbolicTol);

/** A-invariant splitting R^d = E^s + E^u grouped by eigenvalue modulus (<1 vs >1),
 *  with projectors and adapted one-step rates.
 */
struct SpectralSplit {
    int dim_stable = 0;
    int dim_unstable = 0;
    MatX stable_basis;     // d x dim_stable, orthonormal columns
    MatX unstable_basis;   // d x dim_unstable, orthonormal columns
    MatX stable_projector;
    MatX unstable_projector;
    double contraction_rate = 0.0;  // ||A^n|stable||^{1/n}, adapted
    double expansion_rate = 0.0;    // (||A^{-n}|unstable||^{1/n})^{-1}
};

SpectralSplit spectral_split(const LinearPart& A, double tau_hyp = kDefaultHyperbolicTol);

// The 4x4 companion matrix of x^4 - 10x^3 - 10x^2 + x + 1.
LinearPart paper_matrix();

// Arnold cat map ((2,1),(1,1)).
LinearPart cat_matrix();

LinearPart linear_from_json_rows(const std::vector<std::vector<long long>>& rows);

}  // namespace dalab
