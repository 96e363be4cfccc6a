#pragma once

#include <string>
#include <vector>

#include "cll/evolution.hpp"
#include "cll/grid.hpp"
#include "cll/profile.hpp"

namespace cll {

double norm_L2(const ComplexGridFunction& f);
// ||f|| + |k|^{-1} ||f'||
double norm_H1k(const ComplexGridFunction& f, int k);
// sum_{a<=3} |k|^{-a} ||f^(a)||
double norm_H3k(const ComplexGridFunction& f, int k);

// Weighted norms of Eqs. (4.8)-(4.9): L2 blocks over S_{3(delta+sqrt(eps))}
// with the d_k weights, sup blocks over the complement (grid maxima).
double norm_XN(const ComplexGridFunction& f, const ShearProfile& p, int k, double lambda,
               double eps);
double norm_XL(const ComplexGridFunction& f, const ShearProfile& p, int k, double lambda,
               double eps);

// Reference scale M_k = |k|^{5/2} ||omega0k||_{H^3_k}.
double reference_scale_mk(const ComplexGridFunction& omega0k, int k);

enum class TraceQuantity { psi, ux, uy };

struct RateFit {
    std::string quantity;
    double t0, t1;
    double slope, intercept, r2;
    double mk;
    bool inconclusive;  // r2 < 0.9
};

// Least-squares line through (log t, log ||.||_L2) on the window.
RateFit fit_decay_rate(const EvolutionTrace& trace, TraceQuantity q, double t0, double t1,
                       double mk = 0.0);

struct DepletionReport {
    double spatial_exponent, spatial_constant, spatial_r2;
    double temporal_exponent, temporal_constant, temporal_r2;
    double t0, y_lo, y_hi;
    bool inconclusive;
};

// Spatial fit: log sup_{t>=T0} |omega(t,y)| against log |y-y*| on [y_lo, y_hi];
// temporal fit: log sup_{|y-y*|<=t^{-1/2}} |omega(t,y)| against log t, t >= T0.
DepletionReport depletion_measure(const EvolutionTrace& trace, const ShearProfile& p, double t0,
                                  double y_lo, double y_hi);

// Spatial envelope fit for the near-critical diagnostic omega of the spectral
// route (direct resolvent integrand); same window semantics.
DepletionReport depletion_measure_diag(const EvolutionTrace& trace, const ShearProfile& p,
                                       double t0, double y_lo, double y_hi);

// Plain least squares on (x, y); returns slope/intercept/r2.
struct LineFit {
    double slope, intercept, r2;
};
LineFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace cll
