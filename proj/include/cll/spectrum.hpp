#pragma once

#include <span>
#include <vector>

#include "cll/grid.hpp"
#include "cll/profile.hpp"

namespace cll {

struct ComplexBox {
    double re_lo, re_hi;
    double im_min;  // |Im| threshold, bounded away from 0
};

struct DiscreteHit {
    int k;
    Complex lambda;
    double residual;  // ||L v - lambda v|| / ||v||
    double drift;     // distance to the matching eigenvalue at half resolution
    bool stable;      // survives refinement
};

struct EmbeddedProbe {
    int k;
    double lambda;
    double sigma_min;
    double refined_sigma_min;
    bool candidate;  // sigma_min below threshold and not improving under refinement
};

struct SpectrumReport {
    int k_max;
    std::vector<DiscreteHit> discrete_hits;     // stable hits only
    std::vector<EmbeddedProbe> embedded_probes; // full probe table
    bool pass;                                  // Assumption audit verdict
};

// Dense matrix of L_k g = b g + b'' (k^2 - d^2)^{-1} g on interior nodes; the
// same discrete inverse used by I + T, so det(I + T) = 0 exactly at
// lambda - i eps in spec(L_k).
std::vector<double> lk_matrix(const ShearProfile& p, Grid g, int k);

// Eigenvalues of the discretized L_k inside the box, classified by refinement
// (compared against the half-resolution scan: a genuine discrete eigenvalue
// stays put, a discretization artifact of the continuous spectrum drifts).
std::vector<DiscreteHit> discrete_eigenvalue_scan(const ShearProfile& p, Grid g, int k,
                                                  const ComplexBox& box);

// Smallest singular value of the distributional Rayleigh operator of the
// generalized-embedded-eigenvalue condition, in integral form
//   psi + (k^2-d^2)^{-1}[ P.V. b'' psi/(b-lambda) + i pi sum_r b'' psi(r)/|b'(r)| delta_r ].
double embedded_eigenvalue_check(const ShearProfile& p, Grid g, int k, double lambda);

// Roots of b(y) = lambda on (0,1) (bisection on a fine scan).
std::vector<double> profile_level_set(const ShearProfile& p, double lambda);

// Runs both scans for 1 <= k <= k_max on default boxes and lambda grids.
SpectrumReport assumption_report(const ShearProfile& p, Grid g, int k_max, int jobs = 0);

}  // namespace cll
