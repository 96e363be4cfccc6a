#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cll/cutoffs.hpp"
#include "cll/grid.hpp"
#include "cll/profile.hpp"

namespace cll {

// Green's function of k^2 - d^2/dy^2 on (0,1) with Dirichlet conditions,
// evaluated in overflow-safe scaled form (valid for |k| up to thousands).
double greens_closed_form(int k, double y, double z);

// Kernel F_k with d_y d_z G_k = delta(y-z) + F_k; strictly negative.
double fk_kernel(int k, double y, double z);

struct GreensColumn {
    int k;
    double lambda, eps;
    double z;        // snapped source location
    int z_index;     // source node
    ComplexGridFunction values;
};

// Modified Green's function: (k^2 - d^2 + V) G = delta(.-z) with
//   V = b''/(b - lambda + i eps) [phi((y-y*)/delta0) - phi((y-y*)/delta(lambda))].
// One factorization per (k, lambda, eps), shared across sources.
class ModifiedGreens {
public:
    ModifiedGreens(const ShearProfile& p, Grid g, int k, double lambda, double eps,
                   double potential_scale = 1.0);

    GreensColumn column(double z) const;
    // H_k(., z) = [d_z + phi((y-y*)/h) d_y] G_k(., z); z must lie in S_{4 delta}.
    // d_z is a centered difference of the neighbor-source columns.
    ComplexGridFunction hk_kernel(double z) const;

    const HelmholtzOperator& op() const { return op_; }
    const std::vector<Complex>& potential() const { return potential_; }
    double lambda() const { return lambda_; }
    double eps() const { return eps_; }
    int k() const { return k_; }

private:
    const ShearProfile* p_;
    Grid grid_;
    int k_;
    double lambda_, eps_;
    std::vector<Complex> potential_;
    CutoffFamily cuts_;
    HelmholtzOperator op_;
};

// One bound-envelope measurement: the largest observed |LHS| / envelope over
// the sampled transect, at resolution n and refined at 2n.
struct EnvelopeCase {
    int k;
    double lambda, eps, z;
};

struct EnvelopeRow {
    EnvelopeCase c;
    std::string bound_id;
    double max_ratio = 0.0;
    int n = 0;
    double refined_ratio = 0.0;
    bool diverging = false;
};

// Fits the implicit constants of the modified Green's function bounds
// (3.27)/(3.28)/(3.29) and the corollary envelopes (3.51)/(3.52); a case is
// flagged as diverging when the fitted constant grows more than 25% under
// n -> 2n.
std::vector<EnvelopeRow> verify_envelopes(const ShearProfile& p,
                                          std::span<const EnvelopeCase> cases, int n_base);

}  // namespace cll
