#include "cll/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cll/errors.hpp"

namespace cll {

namespace {

constexpr int kScanPoints = 10000;
constexpr double kDelta0Floor = 1e-3;  // desk-scale admissibility floor

double bisect(const std::function<double(double)>& f, double a, double b, double tol) {
    double fa = f(a);
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if ((fa <= 0.0) == (fm <= 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

CriticalPoint find_critical_point(const ProfileEvaluators& p, double tol) {
    const double h = 1.0 / kScanPoints;
    std::vector<double> brackets;
    double yprev = h, fprev = p.db(yprev);
    for (int j = 2; j < kScanPoints; ++j) {
        double y = j * h, f = p.db(y);
        if (fprev == 0.0) brackets.push_back(yprev);
        else if ((fprev < 0.0) != (f < 0.0)) brackets.push_back(bisect(p.db, yprev, y, tol));
        yprev = y;
        fprev = f;
    }
    // A zero sitting exactly on a scan node is reported by two neighbor panels.
    std::vector<double> roots;
    for (double r : brackets)
        if (roots.empty() || r - roots.back() > 2.0 * h) roots.push_back(r);
    if (roots.empty()) throw NoCriticalPoint("b' has no sign change on (0,1)");
    if (roots.size() > 1)
        throw MultipleCriticalPoints(std::to_string(roots.size()) + " sign changes of b' on (0,1)");
    double y_star = roots.front();
    double b2 = p.d2b(y_star);
    if (std::abs(b2) < tol) throw DegenerateCritical("|b''(y*)| = " + std::to_string(std::abs(b2)));
    return {y_star, b2};
}

double compute_delta0(const ProfileEvaluators& p, const CriticalPoint& cp) {
    if (cp.b2_star <= 0.0) throw DegenerateCritical("b''(y*) must be positive");
    auto admissible = [&](double d0) {
        if (d0 <= 0.0 || d0 >= 0.125) return false;
        if (std::min(cp.y_star, 1.0 - cp.y_star) <= 10.0 * d0) return false;
        double sup = 0.0;
        const int m = 400;
        for (int j = 0; j <= m; ++j) {
            double y = cp.y_star + (2.0 * j / m - 1.0) * 4.0 * d0;
            if (y < 0.0 || y > 1.0) continue;
            sup = std::max(sup, std::abs(p.d3b(y)));
        }
        return sup * d0 < std::abs(cp.b2_star) / 10.0;
    };
    double lo = 0.0, hi = 0.125;
    if (!admissible(1e-6))
        throw NoAdmissibleDelta0("conditions fail even for delta0 = 1e-6");
    lo = 1e-6;
    for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (lo + hi);
        (admissible(m) ? lo : hi) = m;
    }
    double d0 = 0.9 * lo;
    if (d0 < kDelta0Floor)
        throw NoAdmissibleDelta0("delta0 = " + std::to_string(d0) + " below floor " +
                                 std::to_string(kDelta0Floor) +
                                 " (critical point too close to a boundary)");
    return d0;
}

ShearProfile::ShearProfile(ProfileEvaluators ev, std::string name)
    : ev_(std::move(ev)), name_(std::move(name)) {
    CriticalPoint cp = find_critical_point(ev_);
    if (cp.b2_star <= 0.0)
        throw DegenerateCritical("b''(y*) = " + std::to_string(cp.b2_star) + " <= 0");
    y_star_ = cp.y_star;
    b2_star_ = cp.b2_star;
    b_star_ = ev_.b(y_star_);
    delta0_ = compute_delta0(ev_, cp);
    max_abs_db_ = 0.0;
    for (int j = 0; j <= kScanPoints; ++j)
        max_abs_db_ = std::max(max_abs_db_, std::abs(ev_.db(static_cast<double>(j) / kScanPoints)));
    b0_ = ev_.b(0.0);
    b1_ = ev_.b(1.0);
}

ShearProfile ShearProfile::quadratic_well() {
    return polynomial(0.5, {0.0, 0.0, 1.0}, "quadratic_well");
}

ShearProfile ShearProfile::quartic_perturbation(double c3, double c4) {
    return polynomial(0.5, {0.0, 0.0, 1.0, c3, c4}, "quartic_perturbation");
}

ShearProfile ShearProfile::cosine_well() {
    using std::numbers::pi;
    ProfileEvaluators ev;
    ev.b = [](double y) { return std::cos(2.0 * pi * y); };
    ev.db = [](double y) { return -2.0 * pi * std::sin(2.0 * pi * y); };
    ev.d2b = [](double y) { return -4.0 * pi * pi * std::cos(2.0 * pi * y); };
    ev.d3b = [](double y) { return 8.0 * pi * pi * pi * std::sin(2.0 * pi * y); };
    return ShearProfile(std::move(ev), "cosine_well");
}

ShearProfile ShearProfile::polynomial(double center, std::vector<double> coeffs, std::string name) {
    auto horner = [](const std::vector<double>& c, double u) {
        double v = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * u + *it;
        return v;
    };
    auto derive = [](const std::vector<double>& c) {
        std::vector<double> d;
        for (std::size_t m = 1; m < c.size(); ++m) d.push_back(c[m] * static_cast<double>(m));
        return d;
    };
    auto c1 = derive(coeffs), c2 = derive(c1), c3 = derive(c2);
    ProfileEvaluators ev;
    ev.b = [=](double y) { return horner(coeffs, y - center); };
    ev.db = [=](double y) { return horner(c1, y - center); };
    ev.d2b = [=](double y) { return horner(c2, y - center); };
    ev.d3b = [=](double y) { return horner(c3, y - center); };
    return ShearProfile(std::move(ev), std::move(name));
}

ShearProfile ShearProfile::from_evaluators(ProfileEvaluators ev, std::string name) {
    return ShearProfile(std::move(ev), std::move(name));
}

SpectralGeometry ShearProfile::geometry() const { return SpectralGeometry(*this); }

SpectralGeometry::SpectralGeometry(const ShearProfile& p)
    : p_(&p), y_star_(p.y_star()), b2_star_(p.b2_star()), b_star_(p.b_star()), delta0_(p.delta0()) {
    // b decreases on [0, y*] and increases on [y*, 1], so the range is
    // [b(y*), max(b(0), b(1))].
    sigma_ = {b_star_, std::max(p.b(0.0), p.b(1.0))};
}

Interval SpectralGeometry::sigma_d(double d) const {
    double lo = std::max(0.0, y_star_ - d), hi = std::min(1.0, y_star_ + d);
    return {b_star_, std::max(p_->b(lo), p_->b(hi))};
}

Interval SpectralGeometry::s_d(double d) const { return {y_star_ - d, y_star_ + d}; }

double SpectralGeometry::delta(double lambda) const {
    return 8.0 * std::sqrt(std::abs(lambda - b_star_) / b2_star_);
}

double SpectralGeometry::rho(double y, double lambda, double eps) const {
    return std::sqrt(std::abs(lambda - b_star_)) + std::sqrt(std::abs(eps)) + std::abs(y - y_star_);
}

double SpectralGeometry::dk(int k, double lambda, double eps) const {
    double s = std::sqrt(std::abs(lambda - b_star_)) + std::sqrt(std::abs(eps));
    return std::min(s, 1.0 / std::abs(static_cast<double>(k)));
}

double SpectralGeometry::rho_k(double y, int k, double lambda, double eps) const {
    return std::min(rho(y, lambda, eps), 1.0 / std::abs(static_cast<double>(k)));
}

double SpectralGeometry::coherent_halfwidth() const {
    return b2_star_ * (delta0_ / 8.0) * (delta0_ / 8.0);
}

}  // namespace cll
