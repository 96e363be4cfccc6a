#include "cll/cutoffs.hpp"

#include <cmath>

#include "cll/errors.hpp"

namespace cll {

namespace {
double rho_exp(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
}  // namespace

double plateau_bump(double x, double a, double b) {
    double s = std::abs(x);
    if (s <= a) return 1.0;
    if (s >= b) return 0.0;
    double num = rho_exp(b - s);
    return num / (num + rho_exp(s - a));
}

double phi_cutoff(double s) { return plateau_bump(s, 1.5, 2.0); }

CutoffFamily::CutoffFamily(const ShearProfile& p)
    : p_(&p), y_star_(p.y_star()), delta0_(p.delta0()), b_star_(p.b_star()) {
    auto geom = p.geometry();
    sigma_d0_width_ = geom.sigma_d(delta0_).length();
    sigma_2d0_3_width_ = geom.sigma_d(2.0 * delta0_ / 3.0).length();
}

double CutoffFamily::Psi(double y) const {
    return plateau_bump(y - y_star_, 2.0 * delta0_, 3.0 * delta0_);
}

double CutoffFamily::PhiInner(double y) const {
    return plateau_bump(y - y_star_, delta0_ / 4.0, delta0_ / 3.0);
}

double CutoffFamily::PhiStar(double lambda) const {
    double u = lambda - b_star_;
    if (u <= 0.0) return 1.0;  // Sigma starts at b(y*)
    return plateau_bump(u, sigma_2d0_3_width_, sigma_d0_width_);
}

int CutoffFamily::m_cut(double lambda) const {
    double mu = std::abs(lambda - b_star_);
    if (mu == 0.0) return 2;
    double delta = p_->geometry().delta(lambda);
    for (int m = 2; m <= 64; ++m) {
        double half = delta / m;
        bool ok = true;
        const int samples = 200;
        for (int j = -samples; j <= samples && ok; ++j) {
            double y = y_star_ + half * j / samples;
            if (y < 0.0 || y > 1.0) continue;
            if (std::abs(p_->b(y) - lambda) < mu / 2.0 * (1.0 - 1e-12)) ok = false;
        }
        if (ok) return m;
    }
    throw Error("m_cut: no M <= 64 satisfies the separation condition");
}

double CutoffFamily::phi_delta(double y, double lambda) const {
    return phi_delta(y, lambda, m_cut(lambda));
}

double CutoffFamily::phi_delta(double y, double lambda, int m) const {
    double delta = p_->geometry().delta(lambda);
    if (delta == 0.0) return 0.0;
    double dprime = delta / m;
    double s = y - y_star_;
    return phi_cutoff(s / delta) * (1.0 - phi_cutoff(s / dprime));
}

double CutoffFamily::h_scale(double lambda, double eps) const {
    return 10.0 * (p_->geometry().delta(lambda) + std::sqrt(std::abs(eps)));
}

double CutoffFamily::greens_bracket(double y, double lambda) const {
    double s = y - y_star_;
    double delta = p_->geometry().delta(lambda);
    double inner = delta > 0.0 ? phi_cutoff(s / delta) : (s == 0.0 ? 1.0 : 0.0);
    return phi_cutoff(s / delta0_) - inner;
}

double CutoffFamily::tstar_bracket(double y, double lambda) const {
    double s = y - y_star_;
    double delta = p_->geometry().delta(lambda);
    double inner = delta > 0.0 ? phi_cutoff(s / delta) : (s == 0.0 ? 1.0 : 0.0);
    return 1.0 - phi_cutoff(s / delta0_) + inner;
}

}  // namespace cll
