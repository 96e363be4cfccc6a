#include "cll/greens.hpp"

#include <algorithm>
#include <cmath>

#include "cll/errors.hpp"

namespace cll {

namespace {

// sinh(a y<) sinh(a (1-y>)) / (a sinh a) written with the exponential factored
// out so nothing overflows for large |k|.
double greens_scaled(double a, double lo, double hi) {
    double e = std::exp(-a * (hi - lo));
    double f1 = -std::expm1(-2.0 * a * lo);        // 1 - exp(-2 a y<)
    double f2 = -std::expm1(-2.0 * a * (1.0 - hi)); // 1 - exp(-2 a (1-y>))
    double fd = -std::expm1(-2.0 * a);             // 1 - exp(-2 a)
    return e * f1 * f2 / (2.0 * a * fd);
}

}  // namespace

double greens_closed_form(int k, double y, double z) {
    double a = std::abs(static_cast<double>(k));
    double lo = std::min(y, z), hi = std::max(y, z);
    return greens_scaled(a, lo, hi);
}

double fk_kernel(int k, double y, double z) {
    double a = std::abs(static_cast<double>(k));
    double lo = std::min(y, z), hi = std::max(y, z);
    double e = std::exp(-a * (hi - lo));
    double f1 = 1.0 + std::exp(-2.0 * a * lo);
    double f2 = 1.0 + std::exp(-2.0 * a * (1.0 - hi));
    double fd = -std::expm1(-2.0 * a);
    return -a * e * f1 * f2 / (2.0 * fd);
}

ModifiedGreens::ModifiedGreens(const ShearProfile& p, Grid g, int k, double lambda, double eps,
                               double potential_scale)
    : p_(&p),
      grid_(g),
      k_(k),
      lambda_(lambda),
      eps_(eps),
      cuts_(p),
      op_(g, k)  // placeholder, replaced below once the potential is assembled
{
    if (eps == 0.0) throw ResolutionGate("eps must be nonzero");
    double floor = eps_floor(g, p);
    if (std::abs(eps) < floor)
        throw ResolutionGate("eps " + std::to_string(std::abs(eps)) + " below floor " +
                             std::to_string(floor) + " at n = " + std::to_string(g.n));
    auto geom = p.geometry();
    auto sd0 = geom.sigma_d(p.delta0());
    if (lambda < sd0.lo - 1e-12 || lambda > sd0.hi + 1e-12)
        throw Error("ModifiedGreens: lambda outside Sigma_{delta0}");

    potential_.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
        double y = g.node(i + 1);
        Complex denom(p.b(y) - lambda, eps);
        potential_[i] = potential_scale * p.d2b(y) * cuts_.greens_bracket(y, lambda) / denom;
    }
    op_ = HelmholtzOperator(g, k, potential_);
}

GreensColumn ModifiedGreens::column(double z) const {
    int zi = grid_.nearest_interior(z);
    std::vector<Complex> rhs(grid_.n, Complex(0.0));
    rhs[zi - 1] = Complex(1.0 / grid_.h);
    GreensColumn col{k_, lambda_, eps_, grid_.node(zi), zi, op_.solve_interior(rhs)};
    return col;
}

ComplexGridFunction ModifiedGreens::hk_kernel(double z) const {
    auto geom = p_->geometry();
    double delta = geom.delta(lambda_);
    if (std::abs(z - p_->y_star()) > 4.0 * delta)
        throw SourceOutOfRange("z = " + std::to_string(z) + " outside S_{4 delta}, delta = " +
                               std::to_string(delta));
    int zi = grid_.nearest_interior(z);
    if (zi < 2 || zi > grid_.n - 1) throw SourceOutOfRange("source too close to the boundary");
    auto cm = column(grid_.node(zi - 1));
    auto cp = column(grid_.node(zi + 1));
    auto c0 = column(grid_.node(zi));
    auto dy = derivative(c0.values);
    double h = cuts_.h_scale(lambda_, eps_);
    ComplexGridFunction out(grid_);
    const double inv2h = 1.0 / (2.0 * grid_.h);
    for (int j = 0; j < grid_.points(); ++j) {
        Complex dz = (cp.values[j] - cm.values[j]) * inv2h;
        double cut = phi_cutoff((grid_.node(j) - p_->y_star()) / h);
        out[j] = dz + cut * dy[j];
    }
    return out;
}

namespace {

struct BoundAccumulator {
    double max_ratio = 0.0;
    void feed(double lhs, double envelope) {
        if (envelope < 1e-12 || lhs < 1e-14) return;
        max_ratio = std::max(max_ratio, lhs / envelope);
    }
};

// local L2 average sqrt(|k| int_{|y-c|<=1/|k|} |G|^2) resp. the rho-window variant
double window_l2(const ComplexGridFunction& col, double c, double halfwidth, double scale) {
    const Grid& g = col.grid();
    int lo = std::max(0, static_cast<int>(std::floor((c - halfwidth) / g.h)));
    int hi = std::min(g.points() - 1, static_cast<int>(std::ceil((c + halfwidth) / g.h)));
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) s += std::norm(col[j]) * g.h;
    return std::sqrt(scale * s);
}

std::vector<EnvelopeRow> envelope_pass(const ShearProfile& p, std::span<const EnvelopeCase> cases,
                                       int n) {
    Grid g = Grid::with_interior(n);
    auto geom = p.geometry();
    std::vector<EnvelopeRow> rows;
    for (const auto& c : cases) {
        ModifiedGreens mg(p, g, c.k, c.lambda, c.eps);
        auto col = mg.column(c.z);
        double z = col.z;
        auto dcol = derivative(col.values);
        double absk = std::abs(static_cast<double>(c.k));
        auto rho = [&](double y) { return geom.rho(y, c.lambda, c.eps); };

        double rz = rho(z);
        double near_scale = std::min(rz, 1.0 / absk);

        BoundAccumulator b27a, b27b, b51, b52;
        bool have_h = std::abs(z - p.y_star()) <= 4.0 * geom.delta(c.lambda);
        ComplexGridFunction hk;
        if (have_h) {
            try {
                hk = mg.hk_kernel(z);
            } catch (const SourceOutOfRange&) {
                have_h = false;
            }
        }
        for (int j = 0; j < g.points(); ++j) {
            double y = g.node(j);
            double ay = std::abs(col.values[j]);
            if (std::abs(y - z) <= near_scale) {
                b27a.feed(ay, near_scale);
                b27b.feed(std::abs(dcol[j]), 1.0);
            }
            double ry = rho(y);
            double env = std::min({std::exp(-absk * std::abs(y - z)), (ry * ry) / (rz * rz), rz / ry});
            b51.feed(ay * (absk + 1.0 / rz), env);
            if (have_h) b52.feed(std::abs(hk[j]), env);
        }

        // entanglement bounds: sample y1 on both sides, take the tightest y2
        BoundAccumulator b28, b29;
        const int samples = 48;
        for (int s = 0; s < samples; ++s) {
            double y1 = (s + 0.5) / samples;
            double lo = std::min(y1, z), hi = std::max(y1, z);
            if (hi - lo < 4.0 * g.h) continue;
            double lhs = std::abs(col.values[g.nearest_interior(y1)]);
            double best28 = -1.0, best29 = -1.0;
            for (int t = 0; t <= samples; ++t) {
                double y2 = lo + (hi - lo) * t / samples;
                double r2 = rho(y2);
                if (r2 >= 1.0 / absk) {
                    double m1 = window_l2(col.values, y2, 1.0 / absk, absk);
                    double env = std::exp(-absk * std::abs(y1 - y2)) * m1;
                    if (env > 1e-12 && (best28 < 0.0 || env < best28)) best28 = env;
                } else if (r2 <= 0.5 / absk) {
                    double m = window_l2(col.values, y2, r2, 1.0 / r2);
                    double r1 = rho(y1);
                    double env = std::min((r1 * r1) / (r2 * r2), r2 / r1) * m;
                    if (env > 1e-12 && (best29 < 0.0 || env < best29)) best29 = env;
                }
            }
            if (best28 > 0.0) b28.feed(lhs, best28);
            if (best29 > 0.0) b29.feed(lhs, best29);
        }

        auto push = [&](const char* id, double ratio) {
            rows.push_back(EnvelopeRow{c, id, ratio, n, 0.0, false});
        };
        push("3.27a", b27a.max_ratio);
        push("3.27b", b27b.max_ratio);
        push("3.28", b28.max_ratio);
        push("3.29", b29.max_ratio);
        push("3.51", b51.max_ratio);
        if (have_h) push("3.52", b52.max_ratio);
    }
    return rows;
}

}  // namespace

std::vector<EnvelopeRow> verify_envelopes(const ShearProfile& p,
                                          std::span<const EnvelopeCase> cases, int n_base) {
    auto coarse = envelope_pass(p, cases, n_base);
    auto fine = envelope_pass(p, cases, 2 * n_base);
    auto key = [](const EnvelopeRow& r) {
        return std::to_string(r.c.k) + "/" + std::to_string(r.c.lambda) + "/" +
               std::to_string(r.c.eps) + "/" + std::to_string(r.c.z) + "/" + r.bound_id;
    };
    for (auto& row : coarse) {
        for (const auto& f : fine) {
            if (key(f) == key(row)) {
                row.refined_ratio = f.max_ratio;
                if (row.max_ratio > 0.0) row.diverging = f.max_ratio > 1.25 * row.max_ratio;
                break;
            }
        }
    }
    return coarse;
}

}  // namespace cll
