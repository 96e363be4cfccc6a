#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace cll {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

// Closed-form evaluators for b and its first three derivatives on [0,1].
struct ProfileEvaluators {
    std::function<double(double)> b, db, d2b, d3b;
};

struct CriticalPoint {
    double y_star;
    double b2_star;
};

// Locates the unique interior zero of b' by a 10^4-point sign scan plus
// bisection. Throws NoCriticalPoint / MultipleCriticalPoints / DegenerateCritical.
CriticalPoint find_critical_point(const ProfileEvaluators& p, double tol = 1e-12);

// Largest delta0 in (0, 1/8) satisfying
//   min(y*, 1-y*) > 10 delta0   and   sup_{|y-y*|<4 delta0} |b'''| * delta0 < b''(y*)/10,
// found by bisection and multiplied by the 0.9 safety factor. Values below the
// desk-scale admissibility floor (1e-3) raise NoAdmissibleDelta0.
double compute_delta0(const ProfileEvaluators& p, const CriticalPoint& cp);

class SpectralGeometry;

// Background shear flow with one non-degenerate interior critical point.
// Immutable after construction; safe to share across threads.
class ShearProfile {
public:
    static ShearProfile quadratic_well();                                   // b = (y-1/2)^2
    static ShearProfile quartic_perturbation(double c3 = 0.1, double c4 = 0.25);
    static ShearProfile cosine_well();                                      // b = cos(2 pi y)
    // b = sum_m coeffs[m] (y-center)^m
    static ShearProfile polynomial(double center, std::vector<double> coeffs,
                                   std::string name = "custom");
    static ShearProfile from_evaluators(ProfileEvaluators ev, std::string name = "custom");

    double b(double y) const { return ev_.b(y); }
    double db(double y) const { return ev_.db(y); }
    double d2b(double y) const { return ev_.d2b(y); }
    double d3b(double y) const { return ev_.d3b(y); }

    double y_star() const { return y_star_; }
    double b2_star() const { return b2_star_; }
    double b_star() const { return b_star_; }
    double delta0() const { return delta0_; }
    double max_abs_db() const { return max_abs_db_; }
    const std::string& name() const { return name_; }

    SpectralGeometry geometry() const;

private:
    ShearProfile(ProfileEvaluators ev, std::string name);

    ProfileEvaluators ev_;
    std::string name_;
    double y_star_, b2_star_, b_star_, delta0_, max_abs_db_;
    double b0_, b1_;  // boundary values b(0), b(1)
};

// The lambda-dependent scales of the critical layer. All members are pure.
class SpectralGeometry {
public:
    SpectralGeometry(const ShearProfile& p);

    Interval sigma() const { return sigma_; }           // [min b, max b]
    Interval sigma_d(double d) const;                   // {b(y): |y - y*| <= d}
    Interval s_d(double d) const;                       // [y* - d, y* + d]
    double lambda_star() const { return b_star_; }

    // delta(lambda) = 8 sqrt(|lambda - b(y*)| / b''(y*))
    double delta(double lambda) const;
    // rho(y; lambda + i eps) = |lambda-b*|^{1/2} + |eps|^{1/2} + |y-y*|
    double rho(double y, double lambda, double eps) const;
    // d_k = (|lambda-b*|^{1/2} + |eps|^{1/2}) ^ 1/|k|
    double dk(int k, double lambda, double eps) const;
    double rho_k(double y, int k, double lambda, double eps) const;

    // Half-width of {lambda : delta(lambda) <= delta0}, the window on which the
    // modified potential bracket keeps its favorable sign.
    double coherent_halfwidth() const;

private:
    const ShearProfile* p_;
    double y_star_, b2_star_, b_star_, delta0_;
    Interval sigma_;
};

}  // namespace cll
