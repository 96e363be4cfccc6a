#pragma once

#include "cll/profile.hpp"

namespace cll {

// Standard smooth partition bump built from rho(u) = exp(-1/u):
//   plateau_bump(x; a, b) = 1 for |x| <= a, 0 for |x| >= b,
//   rho(b-|x|) / (rho(b-|x|) + rho(|x|-a)) in between.
double plateau_bump(double x, double a, double b);

// The fixed cutoff phi: plateau 3/2, support 2.
double phi_cutoff(double s);

// The cutoff family attached to a profile (all scales derived from delta0 and
// delta(lambda)); values in [0,1], plateau/support relations as documented on
// each member.
class CutoffFamily {
public:
    explicit CutoffFamily(const ShearProfile& p);

    // Psi in C_c^inf(S_{3 delta0}), == 1 on S_{2 delta0}.
    double Psi(double y) const;
    // inner Phi supported in (y*-delta0/3, y*+delta0/3), == 1 on [y*-delta0/4, y*+delta0/4].
    double PhiInner(double y) const;
    // Phi* cutoff in the spectral variable: supported in Sigma_{delta0}, == 1 on Sigma_{2 delta0/3}.
    double PhiStar(double lambda) const;
    // phi_delta(y) = phi((y-y*)/delta) [1 - phi((y-y*)/delta')], delta' = delta/M_cut(lambda).
    double phi_delta(double y, double lambda) const;
    // same with a precomputed M_cut (hoist m_cut out of per-node loops)
    double phi_delta(double y, double lambda, int m) const;
    // smallest integer M >= 2 with |b(y)-lambda| >= |lambda-b(y*)|/2 for |y-y*| < delta/M
    int m_cut(double lambda) const;
    // h = 10 (delta(lambda) + |eps|^{1/2})
    double h_scale(double lambda, double eps) const;
    // the modified Green's bracket phi((y-y*)/delta0) - phi((y-y*)/delta(lambda))
    double greens_bracket(double y, double lambda) const;
    // the complementary bracket 1 - phi((y-y*)/delta0) + phi((y-y*)/delta(lambda))
    double tstar_bracket(double y, double lambda) const;

private:
    const ShearProfile* p_;
    double y_star_, delta0_, b_star_;
    double sigma_d0_width_, sigma_2d0_3_width_;
};

}  // namespace cll
