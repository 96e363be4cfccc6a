#include "cll/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "cll/errors.hpp"

namespace cll {

double norm_L2(const ComplexGridFunction& f) { return std::sqrt(integrate_abs2(f)); }

double norm_H1k(const ComplexGridFunction& f, int k) {
    return norm_L2(f) + norm_L2(derivative(f)) / std::abs(static_cast<double>(k));
}

double norm_H3k(const ComplexGridFunction& f, int k) {
    double absk = std::abs(static_cast<double>(k));
    double total = 0.0, scale = 1.0;
    ComplexGridFunction d = f;
    for (int a = 0; a <= 3; ++a) {
        total += norm_L2(d) / scale;
        scale *= absk;
        if (a < 3) d = derivative(d);
    }
    return total;
}

double norm_XN(const ComplexGridFunction& f, const ShearProfile& p, int k, double lambda,
               double eps) {
    const Grid& g = f.grid();
    auto geom = p.geometry();
    double delta = geom.delta(lambda), se = std::sqrt(std::abs(eps));
    double dk = geom.dk(k, lambda, eps);
    double band = 3.0 * (delta + se);
    auto df = derivative(f);
    double total = 0.0;
    const ComplexGridFunction* funcs[2] = {&f, &df};
    for (int a = 0; a < 2; ++a) {
        double l2 = 0.0, sup = 0.0;
        for (int j = 0; j < g.points(); ++j) {
            double y = g.node(j);
            if (std::abs(y - p.y_star()) <= band) {
                l2 += std::norm((*funcs[a])[j]) * g.h;
            } else {
                double w = std::pow(geom.rho_k(y, k, lambda, eps), -1.75 + a);
                sup = std::max(sup, w * std::abs((*funcs[a])[j]));
            }
        }
        total += std::pow(delta + se, -0.5) * std::pow(dk, -1.75 + a) * std::sqrt(l2) + sup;
    }
    return total;
}

double norm_XL(const ComplexGridFunction& f, const ShearProfile& p, int k, double lambda,
               double eps) {
    const Grid& g = f.grid();
    auto geom = p.geometry();
    double delta = geom.delta(lambda), se = std::sqrt(std::abs(eps));
    double dk = geom.dk(k, lambda, eps);
    double band = 3.0 * (delta + se);
    auto df = derivative(f);
    double total = 0.0;
    const ComplexGridFunction* funcs[2] = {&f, &df};
    for (int a = 0; a < 2; ++a) {
        double l2 = 0.0, sup = 0.0;
        for (int j = 0; j < g.points(); ++j) {
            double y = g.node(j);
            if (std::abs(y - p.y_star()) <= band) {
                l2 += std::norm((*funcs[a])[j]) * g.h;
            } else {
                double w = std::pow(geom.rho_k(y, k, lambda, eps), a + 1.0) / dk;
                sup = std::max(sup, w * std::abs((*funcs[a])[j]));
            }
        }
        total += std::pow(delta + se, -0.5) * std::pow(dk, a) * std::sqrt(l2) + sup;
    }
    return total;
}

double reference_scale_mk(const ComplexGridFunction& omega0k, int k) {
    return std::pow(std::abs(static_cast<double>(k)), 2.5) * norm_H3k(omega0k, k);
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    double den = n * sxx - sx * sx;
    double slope = (n * sxy - sx * sy) / den;
    double intercept = (sy - slope * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0, ybar = sy / n;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - (slope * x[i] + intercept);
        ss_res += e * e;
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return {slope, intercept, r2};
}

RateFit fit_decay_rate(const EvolutionTrace& trace, TraceQuantity q, double t0, double t1,
                       double mk) {
    if (t0 < 1.0) throw Error("fit_decay_rate: window must start at t >= 1");
    std::vector<ComplexGridFunction> ux, uy;
    if (q != TraceQuantity::psi) std::tie(ux, uy) = velocities(trace);
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        double t = trace.times[i];
        if (t < t0 || t > t1) continue;
        const ComplexGridFunction& f = q == TraceQuantity::psi ? trace.psi[i]
                                      : q == TraceQuantity::ux ? ux[i]
                                                               : uy[i];
        double v = norm_L2(f);
        if (v <= 0.0) continue;
        lx.push_back(std::log(t));
        ly.push_back(std::log(v));
    }
    if (lx.size() < 10) throw Error("fit_decay_rate: need at least 10 samples in the window");
    auto fit = least_squares(lx, ly);
    const char* name = q == TraceQuantity::psi ? "psi" : q == TraceQuantity::ux ? "ux" : "uy";
    return RateFit{name, t0, t1, fit.slope, fit.intercept, fit.r2, mk, fit.r2 < 0.9};
}

namespace {

DepletionReport depletion_fit(const std::vector<double>& offsets,
                              const std::vector<double>& envelope,
                              const std::vector<double>& times, const std::vector<double>& tsup,
                              double t0, double y_lo, double y_hi) {
    std::vector<double> lx, ly;
    for (std::size_t j = 0; j < offsets.size(); ++j) {
        if (envelope[j] <= 0.0) continue;
        lx.push_back(std::log(offsets[j]));
        ly.push_back(std::log(envelope[j]));
    }
    if (lx.size() < 6) throw Error("depletion_measure: too few spatial samples");
    auto spatial = least_squares(lx, ly);

    std::vector<double> tx, ty;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (tsup[i] <= 0.0) continue;
        tx.push_back(std::log(times[i]));
        ty.push_back(std::log(tsup[i]));
    }
    if (tx.size() < 6) throw Error("depletion_measure: too few temporal samples");
    auto temporal = least_squares(tx, ty);

    DepletionReport rep;
    rep.spatial_exponent = spatial.slope;
    rep.spatial_constant = std::exp(spatial.intercept);
    rep.spatial_r2 = spatial.r2;
    rep.temporal_exponent = -temporal.slope;
    rep.temporal_constant = std::exp(temporal.intercept);
    rep.temporal_r2 = temporal.r2;
    rep.t0 = t0;
    rep.y_lo = y_lo;
    rep.y_hi = y_hi;
    rep.inconclusive = spatial.r2 < 0.9 || temporal.r2 < 0.9;
    return rep;
}

}  // namespace

DepletionReport depletion_measure(const EvolutionTrace& trace, const ShearProfile& p, double t0,
                                  double y_lo, double y_hi) {
    if (t0 < 10.0) throw Error("depletion_measure: T0 must be >= 10");
    const Grid& g = trace.grid;
    if (y_lo < 3.0 * g.h) throw Error("depletion_measure: window must exclude |y-y*| < 3h");
    double y_star = p.y_star();

    std::vector<int> nodes;
    std::vector<double> offsets;
    for (int j = 1; j <= g.n; ++j) {
        double off = std::abs(g.node(j) - y_star);
        if (off >= y_lo && off <= y_hi) {
            nodes.push_back(j);
            offsets.push_back(off);
        }
    }
    std::vector<double> envelope(nodes.size(), 0.0);
    std::vector<double> times, tsup;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        double t = trace.times[i];
        if (t < t0) continue;
        for (std::size_t j = 0; j < nodes.size(); ++j)
            envelope[j] = std::max(envelope[j], std::abs(trace.omega[i][nodes[j]]));
        // shrinking-window sup over |y - y*| <= t^{-1/2}
        double win = 1.0 / std::sqrt(t);
        double s = 0.0;
        for (int j = 1; j <= g.n; ++j)
            if (std::abs(g.node(j) - y_star) <= win) s = std::max(s, std::abs(trace.omega[i][j]));
        times.push_back(t);
        tsup.push_back(s);
    }
    if (times.empty()) throw Error("depletion_measure: trace does not cover t >= T0");
    return depletion_fit(offsets, envelope, times, tsup, t0, y_lo, y_hi);
}

DepletionReport depletion_measure_diag(const EvolutionTrace& trace, const ShearProfile& p,
                                       double t0, double y_lo, double y_hi) {
    if (trace.diag_y.empty()) throw Error("depletion_measure_diag: trace carries no diagnostic");
    const Grid& g = trace.grid;
    double y_star = p.y_star();
    std::vector<double> offsets;
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < trace.diag_y.size(); ++j) {
        double off = std::abs(g.node(trace.diag_y[j]) - y_star);
        if (off >= y_lo && off <= y_hi) {
            cols.push_back(j);
            offsets.push_back(off);
        }
    }
    std::vector<double> envelope(cols.size(), 0.0);
    std::vector<double> times, tsup;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        double t = trace.times[i];
        if (t < t0) continue;
        double s = 0.0;
        double win = 1.0 / std::sqrt(t);
        for (std::size_t j = 0; j < cols.size(); ++j) {
            double a = std::abs(trace.diag_omega[i][cols[j]]);
            envelope[j] = std::max(envelope[j], a);
            if (offsets[j] <= win) s = std::max(s, a);
        }
        times.push_back(t);
        tsup.push_back(s);
    }
    if (times.empty()) throw Error("depletion_measure_diag: trace does not cover t >= T0");
    return depletion_fit(offsets, envelope, times, tsup, t0, y_lo, y_hi);
}

}  // namespace cll
