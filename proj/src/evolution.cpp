#include "cll/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cll/errors.hpp"

namespace cll {

namespace {

using std::numbers::pi;

double max_abs_b(const ShearProfile& p) {
    double m = 0.0;
    for (int j = 0; j <= 2000; ++j) m = std::max(m, std::abs(p.b(j / 2000.0)));
    return m;
}

// psi from omega: (k^2 - D2) psi = -omega on interior nodes, Dirichlet.
ComplexGridFunction stream_from_omega(const HelmholtzOperator& helm,
                                      const ComplexGridFunction& omega) {
    const Grid& g = helm.grid();
    std::vector<Complex> rhs(g.n);
    for (int i = 0; i < g.n; ++i) rhs[i] = -omega[i + 1];
    return helm.solve_interior(rhs);
}

double weighted_energy(const ShearProfile& p, const ComplexGridFunction& omega) {
    const Grid& g = omega.grid();
    ComplexGridFunction f(g);
    for (int j = 0; j < g.points(); ++j) f[j] = std::norm(omega[j]) / p.d2b(g.node(j));
    return integrate(f).real();
}

bool convex_profile(const ShearProfile& p) {
    for (int j = 0; j <= 400; ++j)
        if (p.d2b(j / 400.0) <= 0.0) return false;
    return true;
}

}  // namespace

EvolutionTrace evolve_direct(const ShearProfile& p, Grid g, int k,
                             const ComplexGridFunction& omega0k, double t_end, double dt,
                             double snapshot_dt, bool couple_psi) {
    if (k == 0) throw Error("evolve_direct: k must be nonzero");
    double bound = 0.5 / (std::abs(static_cast<double>(k)) * max_abs_b(p));
    if (std::abs(dt) > bound)
        throw StabilityViolation("dt = " + std::to_string(dt) + " exceeds 0.5/(|k| max|b|) = " +
                                 std::to_string(bound));

    HelmholtzOperator helm(g, k);
    const Complex ik(0.0, static_cast<double>(k));
    const bool track_energy = couple_psi && convex_profile(p);

    auto rhs = [&](const ComplexGridFunction& w) {
        ComplexGridFunction out(g);
        if (couple_psi) {
            auto psi = stream_from_omega(helm, w);
            for (int j = 0; j < g.points(); ++j) {
                double y = g.node(j);
                out[j] = -ik * (p.b(y) * w[j] - p.d2b(y) * psi[j]);
            }
        } else {
            for (int j = 0; j < g.points(); ++j) out[j] = -ik * p.b(g.node(j)) * w[j];
        }
        return out;
    };

    EvolutionTrace trace;
    trace.k = k;
    trace.method = EvolutionMethod::direct;
    trace.grid = g;

    const double direction = t_end >= 0.0 ? 1.0 : -1.0;
    double step = direction * std::abs(dt);
    const double snap = std::max(std::abs(snapshot_dt), std::abs(step));
    int snaps = static_cast<int>(std::round(std::abs(t_end) / snap));
    snaps = std::max(snaps, 1);
    int substeps = std::max(1, static_cast<int>(std::ceil(snap / std::abs(dt) - 1e-12)));
    step = direction * snap / substeps;

    ComplexGridFunction w = omega0k;
    auto record = [&](double t) {
        trace.times.push_back(t);
        trace.omega.push_back(w);
        trace.psi.push_back(stream_from_omega(helm, w));
        if (track_energy) trace.energy.push_back(weighted_energy(p, w));
    };
    record(0.0);
    for (int s = 1; s <= snaps; ++s) {
        for (int m = 0; m < substeps; ++m) {
            auto k1 = rhs(w);
            ComplexGridFunction u2 = w;
            for (int j = 0; j < g.points(); ++j) u2[j] += 0.5 * step * k1[j];
            auto k2 = rhs(u2);
            ComplexGridFunction u3 = w;
            for (int j = 0; j < g.points(); ++j) u3[j] += 0.5 * step * k2[j];
            auto k3 = rhs(u3);
            ComplexGridFunction u4 = w;
            for (int j = 0; j < g.points(); ++j) u4[j] += step * k3[j];
            auto k4 = rhs(u4);
            for (int j = 0; j < g.points(); ++j)
                w[j] += (step / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        record(direction * s * snap);
    }
    return trace;
}

namespace {

ComplexGridFunction resample_linear(const ComplexGridFunction& f, Grid fine) {
    const Grid& gc = f.grid();
    ComplexGridFunction out(fine);
    for (int j = 0; j < fine.points(); ++j) {
        double x = fine.node(j) / gc.h;
        int lo = std::clamp(static_cast<int>(std::floor(x)), 0, gc.points() - 2);
        double frac = x - lo;
        out[j] = (1.0 - frac) * f[lo] + frac * f[lo + 1];
    }
    return out;
}

// Fixed-eps jump evaluations on a dyadically refined solve grid (one level by
// default: its eps floor admits a three-point schedule at canonical n), with
// results restricted back to the canonical node set exactly.
class JumpEvaluator {
public:
    JumpEvaluator(const ShearProfile& p, Grid g, int k, const ComplexGridFunction& omega0k,
                  int refine_level)
        : p_(&p), g_(g), k_(k), level_(refine_level) {
        solve_grid_ = Grid::with_interior((1 << level_) * (g.n + 1) - 1);
        omega0_fine_ = resample_linear(omega0k, solve_grid_);
        real_data_ = true;
        double scale = omega0k.max_abs();
        for (int j = 0; j < omega0k.size(); ++j)
            if (std::abs(omega0k[j].imag()) > 1e-15 * scale) real_data_ = false;
    }

    Grid solve_grid() const { return solve_grid_; }
    int fine_index(int coarse_index) const { return coarse_index << level_; }

    // [psi+ - psi-](., lambda + i eps) on the canonical grid, no extrapolation
    ComplexGridFunction jump_at(double lambda, double eps) const {
        auto plus = solve_rayleigh(*p_, solve_grid_, k_, lambda, eps, Branch::plus, omega0_fine_);
        ComplexGridFunction diff(solve_grid_);
        if (real_data_) {
            for (int j = 0; j < solve_grid_.points(); ++j)
                diff[j] = Complex(0.0, 2.0 * plus.psi[j].imag());
        } else {
            auto minus = solve_rayleigh(*p_, solve_grid_, k_, lambda, eps, Branch::minus, omega0_fine_);
            diff = plus.psi - minus.psi;
        }
        ComplexGridFunction out(g_);
        for (int j = 0; j < g_.points(); ++j) out[j] = diff[j << level_];
        return out;
    }

private:
    const ShearProfile* p_;
    Grid g_;
    int k_;
    int level_;
    Grid solve_grid_;
    ComplexGridFunction omega0_fine_;
    bool real_data_;
};

// Quasi-resonances of the resolvent show up as narrow spikes of the spectral
// density; the lambda rule must refine onto them or their mass is lost. A scan
// of ||Im psi+|| at the smallest admissible eps (spikes are eps-broadened, so
// this resolution suffices to flag them) locates the targets.
std::vector<double> detect_density_spikes(const JumpEvaluator& jump, double lo, double hi,
                                          double eps_scan) {
    const int coarse = 192;
    std::vector<double> lams, q;
    for (int i = 0; i <= coarse; ++i) {
        double lam = lo + (hi - lo) * (i + 0.5) / (coarse + 1);
        lams.push_back(lam);
        q.push_back(std::sqrt(integrate_abs2(jump.jump_at(lam, eps_scan))));
    }
    // adaptive splits where the density varies sharply between neighbors
    for (int pass = 0; pass < 4; ++pass) {
        std::vector<double> nl, nq;
        bool split_any = false;
        for (std::size_t i = 0; i + 1 < lams.size(); ++i) {
            nl.push_back(lams[i]);
            nq.push_back(q[i]);
            double ratio = std::max(q[i], q[i + 1]) / std::max(1e-12, std::min(q[i], q[i + 1]));
            if (ratio > 1.8 && lams[i + 1] - lams[i] > (hi - lo) * 1e-5) {
                double mid = 0.5 * (lams[i] + lams[i + 1]);
                nl.push_back(mid);
                nq.push_back(std::sqrt(integrate_abs2(jump.jump_at(mid, eps_scan))));
                split_any = true;
            }
        }
        nl.push_back(lams.back());
        nq.push_back(q.back());
        lams.swap(nl);
        q.swap(nq);
        if (!split_any) break;
    }
    std::vector<double> sorted = q;
    std::sort(sorted.begin(), sorted.end());
    double median = sorted[sorted.size() / 2];
    std::vector<double> targets;
    for (std::size_t i = 1; i + 1 < q.size(); ++i)
        if (q[i] > 4.0 * median && q[i] >= q[i - 1] && q[i] >= q[i + 1]) targets.push_back(lams[i]);
    return targets;
}

struct JumpTables {
    LambdaQuadrature quad;
    std::vector<double> eps;  // descending
    // jump[eps index][node index] on the canonical grid
    std::vector<std::vector<ComplexGridFunction>> jump;
};

// Neville table in eps (first order in eps, then one more sweep); linear, so
// it commutes with the lambda quadrature; applying it after integration keeps
// the error budget readable.
Complex neville_eps(std::span<const double> eps, std::span<const Complex> v) {
    std::vector<Complex> t(v.begin(), v.end());
    const std::size_t m = t.size();
    for (std::size_t col = 1; col < m && col <= 2; ++col)
        for (std::size_t i = m - 1; i >= col; --i)
            t[i] = (eps[i - col] * t[i] - eps[i] * t[i - 1]) / (eps[i - col] - eps[i]);
    return t[m - 1];
}

ComplexGridFunction synthesize_psi(const JumpTables& t, Grid g, int k, double time) {
    // psi_k(t,y) = (1/2 pi i) lim_{eps->0+} sum_j w_j e^{-i k lambda_j t} jump_j(y)
    const double kt = static_cast<double>(k) * time;
    if (t.quad.max_panel_width * std::abs(kt) > 0.5)
        throw UnresolvedOscillation("lambda panels too wide for |k| t = " + std::to_string(kt));
    const Complex norm = 1.0 / Complex(0.0, 2.0 * pi);
    std::vector<ComplexGridFunction> per_eps;
    for (std::size_t e = 0; e < t.eps.size(); ++e) {
        ComplexGridFunction acc(g);
        for (std::size_t j = 0; j < t.quad.size(); ++j) {
            double phase = -kt * t.quad.nodes[j];
            Complex c = norm * t.quad.weights[j] * Complex(std::cos(phase), std::sin(phase));
            for (int i = 0; i < g.points(); ++i) acc[i] += c * t.jump[e][j][i];
        }
        per_eps.push_back(std::move(acc));
    }
    if (per_eps.size() == 1) return per_eps.front();
    ComplexGridFunction psi(g);
    std::vector<Complex> stack(per_eps.size());
    for (int i = 0; i < g.points(); ++i) {
        for (std::size_t e = 0; e < per_eps.size(); ++e) stack[e] = per_eps[e][i];
        psi[i] = neville_eps(t.eps, stack);
    }
    return psi;
}

ComplexGridFunction omega_from_psi(const HelmholtzOperator& helm, const ComplexGridFunction& psi) {
    // omega = (D2 - k^2) psi = -(k^2 - D2) psi on interior nodes
    auto a = helm.apply(psi);
    ComplexGridFunction w(psi.grid());
    const Grid& g = psi.grid();
    for (int j = 1; j <= g.n; ++j) w[j] = -a[j];
    // second-order one-sided values at the walls
    auto second = [&](int j0, int j1, int j2, int j3) {
        double h2 = g.h * g.h;
        return (2.0 * psi[j0] - 5.0 * psi[j1] + 4.0 * psi[j2] - psi[j3]) / h2;
    };
    int last = g.points() - 1;
    double k2 = static_cast<double>(helm.k()) * helm.k();
    w[0] = second(0, 1, 2, 3) - k2 * psi[0];
    w[last] = second(last, last - 1, last - 2, last - 3) - k2 * psi[last];
    return w;
}

}  // namespace

EvolutionTrace evolve_spectral(const ShearProfile& p, Grid g, int k,
                               const ComplexGridFunction& omega0k, std::span<const double> times,
                               const SpectralEvolveSpec& spec) {
    if (k == 0) throw Error("evolve_spectral: k must be nonzero");
    auto geom = p.geometry();
    auto sigma = geom.sigma();

    JumpEvaluator jump_eval(p, g, k, omega0k, /*refine_level=*/1);
    auto eps = clip_eps_schedule(spec.eps_schedule, eps_floor(jump_eval.solve_grid(), p));

    double tmax = 0.0;
    for (double t : times) tmax = std::max(tmax, std::abs(t));
    LambdaPanelSpec panels = spec.panels;
    panels.kt_max = std::max(panels.kt_max, std::abs(static_cast<double>(k)) * tmax);

    std::vector<double> targets{p.b_star(), p.b(0.0), p.b(1.0)};
    for (double s : detect_density_spikes(jump_eval, sigma.lo, sigma.hi, eps.back()))
        targets.push_back(s);
    auto quad = build_lambda_quadrature(sigma.lo, sigma.hi, targets, panels);

    JumpTables table{quad, eps, {}};
    table.jump.resize(eps.size());
    for (std::size_t e = 0; e < eps.size(); ++e) {
        table.jump[e].reserve(quad.size());
        for (double lam : quad.nodes) table.jump[e].push_back(jump_eval.jump_at(lam, eps[e]));
    }

    HelmholtzOperator helm(g, k);
    EvolutionTrace trace;
    trace.k = k;
    trace.method = EvolutionMethod::spectral;
    trace.grid = g;

    for (double t : times) {
        auto psi = synthesize_psi(table, g, k, t);
        trace.omega.push_back(omega_from_psi(helm, psi));
        trace.psi.push_back(std::move(psi));
        trace.times.push_back(t);
    }

    if (spec.depletion_diagnostic) {
        // Direct resolvent-integrand route near y*, the regularized limit of
        //   (1/2 pi i) int e^{-ik lambda t} [(b'' psi+ - w0)/(b-lambda+i0)
        //                                  - (b'' psi- - w0)/(b-lambda-i0)] d lambda:
        // the delta part of 1/(b-lambda -+ i0) integrates exactly to a free-streaming
        // term, the rest is a principal value of the jump:
        //   omega(t,y) = e^{-i k b(y) t} [w0(y) - b'' Re-avg psi(y, b(y))]
        //              + (b''/2 pi i) P.V. int e^{-ik lambda t} J(y,lambda)/(b(y)-lambda) d lambda.
        const double w_pv = std::min(0.4 / std::max(1.0, panels.kt_max), 0.05 * sigma.length());
        for (int j = 0; j < spec.diag_points; ++j) {
            double off = spec.diag_halfwidth * (j + 1) / spec.diag_points;
            double y = p.y_star() + off;
            if (y >= 1.0 - 2.0 * g.h) continue;
            int yi = g.nearest_interior(y);
            if (std::abs(g.node(yi) - p.y_star()) < 3.0 * g.h) continue;
            trace.diag_y.push_back(yi);
        }
        std::vector<std::vector<Complex>> diag(times.size());
        for (std::size_t ti = 0; ti < times.size(); ++ti) diag[ti].resize(trace.diag_y.size());

        for (std::size_t jy = 0; jy < trace.diag_y.size(); ++jy) {
            int yi = trace.diag_y[jy];
            double y = g.node(yi);
            double lam0 = p.b(y);
            // boundary value (psi+ + psi-)/2 at lambda = b(y), extrapolated in eps
            // (the resolvent is smooth there; no quasi-resonance sits in the
            // diagnostic window)
            Complex bv(0.0);
            {
                Grid gs = jump_eval.solve_grid();
                auto w0s = resample_linear(omega0k, gs);
                int ys = jump_eval.fine_index(yi);
                std::vector<Complex> vals;
                for (double e : eps) {
                    auto plus = solve_rayleigh(p, gs, k, lam0, e, Branch::plus, w0s);
                    auto minus = solve_rayleigh(p, gs, k, lam0, e, Branch::minus, w0s);
                    vals.push_back(0.5 * (plus.psi[ys] + minus.psi[ys]));
                }
                bv = vals.size() >= 2 ? neville_eps(eps, vals) : vals.back();
            }
            // symmetric pairs inside |lambda-lam0| <= w_pv plus refined outer
            // panels; the jump extends by zero outside the spectrum
            struct Node { double lam, w; };
            std::vector<Node> pv_nodes;
            const int levels = 12;
            double u_hi = w_pv;
            for (int m = 0; m < levels; ++m) {
                double u_lo = u_hi / 2.0;
                pv_nodes.push_back({0.75 * u_hi, u_hi - u_lo});  // midpoint per dyadic shell
                u_hi = u_lo;
            }
            auto jump_at = [&](double lam, double e) -> Complex {
                if (lam <= sigma.lo || lam >= sigma.hi) return Complex(0.0);
                return jump_eval.jump_at(lam, e)[yi];
            };
            LambdaPanelSpec outer_spec = panels;
            auto left = build_lambda_quadrature(sigma.lo, lam0 - w_pv, targets, outer_spec);
            auto right = build_lambda_quadrature(lam0 + w_pv, sigma.hi, targets, outer_spec);
            std::vector<std::vector<Complex>> jp(eps.size()), jm(eps.size()), jl(eps.size()),
                jr(eps.size());
            for (std::size_t e = 0; e < eps.size(); ++e) {
                jp[e].resize(pv_nodes.size());
                jm[e].resize(pv_nodes.size());
                for (std::size_t m = 0; m < pv_nodes.size(); ++m) {
                    jp[e][m] = jump_at(lam0 + pv_nodes[m].lam, eps[e]);
                    jm[e][m] = jump_at(lam0 - pv_nodes[m].lam, eps[e]);
                }
                jl[e].resize(left.size());
                jr[e].resize(right.size());
                for (std::size_t m = 0; m < left.size(); ++m) jl[e][m] = jump_at(left.nodes[m], eps[e]);
                for (std::size_t m = 0; m < right.size(); ++m) jr[e][m] = jump_at(right.nodes[m], eps[e]);
            }

            double b2 = p.d2b(y);
            std::vector<Complex> pv_stack(eps.size());
            for (std::size_t ti = 0; ti < times.size(); ++ti) {
                double t = times[ti];
                double kt = static_cast<double>(k) * t;
                auto osc = [&](double lam) {
                    double ph = -kt * lam;
                    return Complex(std::cos(ph), std::sin(ph));
                };
                for (std::size_t e = 0; e < eps.size(); ++e) {
                    Complex pv(0.0);
                    for (std::size_t m = 0; m < pv_nodes.size(); ++m) {
                        double u = pv_nodes[m].lam;
                        // 1/(b(y)-lambda) = -1/u at lam0+u, +1/u at lam0-u
                        pv += pv_nodes[m].w * (osc(lam0 - u) * jm[e][m] - osc(lam0 + u) * jp[e][m]) / u;
                    }
                    for (std::size_t m = 0; m < left.size(); ++m)
                        pv += left.weights[m] * osc(left.nodes[m]) * jl[e][m] / (lam0 - left.nodes[m]);
                    for (std::size_t m = 0; m < right.size(); ++m)
                        pv += right.weights[m] * osc(right.nodes[m]) * jr[e][m] / (lam0 - right.nodes[m]);
                    pv_stack[e] = pv;
                }
                Complex pv_lim = eps.size() >= 2 ? neville_eps(eps, pv_stack) : pv_stack.front();
                Complex local = osc(lam0) * (omega0k[yi] - b2 * bv);
                diag[ti][jy] = local + b2 * pv_lim / Complex(0.0, 2.0 * pi);
            }
        }
        trace.diag_omega = std::move(diag);
    }
    return trace;
}

std::pair<std::vector<ComplexGridFunction>, std::vector<ComplexGridFunction>> velocities(
    const EvolutionTrace& trace) {
    std::vector<ComplexGridFunction> ux, uy;
    const Complex ik(0.0, static_cast<double>(trace.k));
    for (const auto& psi : trace.psi) {
        auto d = derivative(psi);
        d *= Complex(-1.0);
        ux.push_back(std::move(d));
        auto v = psi;
        v *= ik;
        uy.push_back(std::move(v));
    }
    return {std::move(ux), std::move(uy)};
}

ComplexGridFunction omega0_named(Grid g, const std::string& name) {
    if (name == "sin_pi" || name.empty())
        return ComplexGridFunction::sample(g, [](double y) { return std::sin(pi * y); });
    if (name == "sin_2pi")
        return ComplexGridFunction::sample(g, [](double y) { return std::sin(2.0 * pi * y); });
    if (name == "bump")
        return ComplexGridFunction::sample(g, [](double y) {
            double u = (y - 0.5) / 0.35;
            return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) * std::exp(1.0) : 0.0;
        });
    throw ConfigError("unknown initial data '" + name + "' (use sin_pi, sin_2pi, bump)");
}

}  // namespace cll
