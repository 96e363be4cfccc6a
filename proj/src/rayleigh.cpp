#include "cll/rayleigh.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>

#include "cll/errors.hpp"

namespace cll {

namespace {

bool is_real_function(const ComplexGridFunction& f) {
    double scale = f.max_abs();
    for (int j = 0; j < f.size(); ++j)
        if (std::abs(f[j].imag()) > 1e-15 * scale) return false;
    return true;
}

std::vector<Complex> resolvent_weight(const ShearProfile& p, const Grid& g, double lambda,
                                      double eps, Branch iota) {
    std::vector<Complex> w(g.n);
    double s = branch_sign(iota) * eps;
    for (int i = 0; i < g.n; ++i) {
        double y = g.node(i + 1);
        w[i] = 1.0 / Complex(p.b(y) - lambda, s);
    }
    return w;
}

double relative_residual(const HelmholtzOperator& op, const ComplexGridFunction& u,
                         const ComplexGridFunction& rhs) {
    auto au = op.apply(u);
    double r = 0.0, b = 0.0;
    for (int j = 1; j <= op.grid().n; ++j) {
        r = std::max(r, std::abs(au[j] - rhs[j]));
        b = std::max(b, std::abs(rhs[j]));
    }
    return b > 0.0 ? r / b : r;
}

}  // namespace

std::vector<Complex> rayleigh_potential(const ShearProfile& p, const Grid& g, double lambda,
                                        double eps, Branch iota) {
    std::vector<Complex> V(g.n);
    double s = branch_sign(iota) * eps;
    for (int i = 0; i < g.n; ++i) {
        double y = g.node(i + 1);
        V[i] = p.d2b(y) / Complex(p.b(y) - lambda, s);
    }
    return V;
}

ResolventSolution solve_rayleigh(const ShearProfile& p, Grid g, int k, double lambda, double eps,
                                 Branch iota, const ComplexGridFunction& omega0k) {
    if (k == 0) throw Error("solve_rayleigh: k must be nonzero");
    if (eps <= 0.0) throw Error("solve_rayleigh: eps must be positive");
    double floor = eps_floor(g, p);
    if (eps < floor * (1.0 - 1e-12))
        throw ResolutionGate("eps " + std::to_string(eps) + " below floor " + std::to_string(floor));

    auto V = rayleigh_potential(p, g, lambda, eps, iota);
    auto W = resolvent_weight(p, g, lambda, eps, iota);
    ComplexGridFunction rhs(g);
    for (int i = 0; i < g.n; ++i) rhs[i + 1] = W[i] * omega0k[i + 1];

    HelmholtzOperator op(g, k, V);
    ComplexGridFunction psi;
    try {
        psi = op.solve(rhs);
    } catch (const SingularSystem& e) {
        std::cerr << "[cll] PossibleEigenvalue diagnostic at lambda=" << lambda << " eps=" << eps
                  << ": " << e.what() << "\n";
        throw PossibleEigenvalue(lambda, eps, e.what());
    }
    double res = relative_residual(op, psi, rhs);
    return ResolventSolution{k, lambda, eps, iota, std::move(psi), res, {}, {}, {}, {}};
}

ComplexGridFunction apply_T(const ShearProfile& p, Grid g, int k, double lambda, double eps,
                            const ComplexGridFunction& gfun) {
    auto V = rayleigh_potential(p, g, lambda, eps, Branch::plus);
    std::vector<Complex> rhs(g.n);
    for (int i = 0; i < g.n; ++i) rhs[i] = V[i] * gfun[i + 1];
    HelmholtzOperator helm(g, k);
    return helm.solve_interior(rhs);
}

ComplexGridFunction apply_Tstar(const ShearProfile& p, Grid g, int k, double lambda, double eps,
                                const ComplexGridFunction& gfun, BracketReading reading) {
    ModifiedGreens mg(p, g, k, lambda, eps);
    CutoffFamily cuts(p);
    auto V = rayleigh_potential(p, g, lambda, eps, Branch::plus);
    std::vector<Complex> rhs(g.n);
    for (int i = 0; i < g.n; ++i) {
        double y = g.node(i + 1);
        double bracket = reading == BracketReading::z_variable ? cuts.tstar_bracket(y, lambda) : 1.0;
        rhs[i] = bracket * V[i] * gfun[i + 1];
    }
    auto out = mg.op().solve_interior(rhs);
    if (reading == BracketReading::y_variable) {
        for (int j = 0; j < g.points(); ++j) out[j] *= cuts.tstar_bracket(g.node(j), lambda);
    }
    return out;
}

namespace {

// Dense matrix of T or T* on interior nodes: columns of the discrete inverse
// times the multiplier diagonal.
DenseMatrix operator_matrix(const ShearProfile& p, Grid g, int k, double lambda, double eps,
                            NormFlavor flavor, BracketReading reading) {
    const int n = g.n;
    DenseMatrix inv;
    std::vector<Complex> mult(n);
    auto V = rayleigh_potential(p, g, lambda, eps, Branch::plus);
    if (flavor == NormFlavor::H1k) {
        HelmholtzOperator helm(g, k);
        inv = helm.dense_inverse();
        for (int j = 0; j < n; ++j) mult[j] = V[j];
    } else {
        ModifiedGreens mg(p, g, k, lambda, eps);
        inv = mg.op().dense_inverse();
        CutoffFamily cuts(p);
        for (int j = 0; j < n; ++j) {
            double y = g.node(j + 1);
            double bracket =
                reading == BracketReading::z_variable ? cuts.tstar_bracket(y, lambda) : 1.0;
            mult[j] = bracket * V[j];
        }
        if (reading == BracketReading::y_variable) {
            for (int i = 0; i < n; ++i) {
                double br = cuts.tstar_bracket(g.node(i + 1), lambda);
                for (int j = 0; j < n; ++j) inv.at(i, j) *= br;
            }
        }
    }
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = inv.at(i, j) * mult[j];
    for (int i = 0; i < n; ++i) m.at(i, i) += Complex(1.0);  // I + T
    return m;
}

std::vector<double> h1k_cholesky(const Grid& g, int k) {
    const int n = g.n;
    const double h = g.h;
    const double invk2 = 1.0 / (static_cast<double>(k) * k);
    const double q = 1.0 / (4.0 * h * h);
    // N = h (I + |k|^{-2} D^T D), centered differences with Dirichlet ghosts
    std::vector<double> N(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        double diag = 1.0;
        int neighbors = (i > 0 ? 1 : 0) + (i + 1 < n ? 1 : 0);
        diag += invk2 * q * neighbors;
        N[static_cast<std::size_t>(i) * n + i] = h * diag;
        if (i + 2 < n) {
            N[static_cast<std::size_t>(i) * n + i + 2] = -h * invk2 * q;
            N[static_cast<std::size_t>(i + 2) * n + i] = -h * invk2 * q;
        }
    }
    return cholesky_lower(std::move(N), n);
}

// alpha = 0 and alpha = 1 weight samples of the X_N / X_L norms; the L2 block
// carries the sqrt(h) measure, the sup block its l^8 surrogate h^{1/8}.
void x_weight_blocks(const ShearProfile& p, const Grid& g, int k, double lambda, double eps,
                     NormFlavor flavor, std::vector<double>& w0, std::vector<double>& w1) {
    auto geom = p.geometry();
    double delta = geom.delta(lambda);
    double se = std::sqrt(std::abs(eps));
    double band = 3.0 * (delta + se);
    double dk = geom.dk(k, lambda, eps);
    double l2m = std::sqrt(g.h);
    double supm = std::pow(g.h, 1.0 / 8.0);
    w0.resize(g.n);
    w1.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
        double y = g.node(i + 1);
        bool in_band = std::abs(y - p.y_star()) <= band;
        double rk = geom.rho_k(y, k, lambda, eps);
        if (flavor == NormFlavor::XN) {
            if (in_band) {
                w0[i] = std::pow(delta + se, -0.5) * std::pow(dk, -1.75) * l2m;
                w1[i] = std::pow(delta + se, -0.5) * std::pow(dk, -0.75) * l2m;
            } else {
                w0[i] = std::pow(rk, -1.75) * supm;
                w1[i] = std::pow(rk, -0.75) * supm;
            }
        } else {
            if (in_band) {
                w0[i] = std::pow(delta + se, -0.5) * l2m;
                w1[i] = std::pow(delta + se, -0.5) * dk * l2m;
            } else {
                w0[i] = rk / dk * supm;
                w1[i] = rk * rk / dk * supm;
            }
        }
    }
}

// Gram matrix sum_a D_a^T diag(w_a)^2 D_a with D_0 = I and D_1 the centered
// difference; Cholesky factor returned for the sigma_min congruence.
std::vector<double> x_cholesky(const Grid& g, const std::vector<double>& w0,
                               const std::vector<double>& w1) {
    const int n = g.n;
    std::vector<double> N(static_cast<std::size_t>(n) * n, 0.0);
    const double c = 1.0 / (2.0 * g.h);
    for (int i = 0; i < n; ++i) N[static_cast<std::size_t>(i) * n + i] = w0[i] * w0[i];
    for (int i = 0; i < n; ++i) {
        double ww = w1[i] * w1[i] * c * c;
        int a = i - 1, b = i + 1;
        if (a >= 0) N[static_cast<std::size_t>(a) * n + a] += ww;
        if (b < n) N[static_cast<std::size_t>(b) * n + b] += ww;
        if (a >= 0 && b < n) {
            N[static_cast<std::size_t>(a) * n + b] -= ww;
            N[static_cast<std::size_t>(b) * n + a] -= ww;
        }
    }
    return cholesky_lower(std::move(N), n);
}

}  // namespace

LapReport lap_probe(const ShearProfile& p, Grid g, int k, double lambda,
                    std::span<const double> eps_schedule, NormFlavor flavor,
                    BracketReading reading) {
    LapReport rep{k, lambda, flavor, reading, {}, 0.0};
    std::vector<double> chol;
    if (flavor == NormFlavor::H1k) chol = h1k_cholesky(g, k);
    double kappa = std::numeric_limits<double>::infinity();
    for (double eps : eps_schedule) {
        DenseMatrix m = operator_matrix(p, g, k, lambda, eps, flavor, reading);
        double smin;
        if (flavor == NormFlavor::H1k) {
            smin = smallest_singular_value(congruence_transform(chol, m));
        } else {
            std::vector<double> w0, w1;
            x_weight_blocks(p, g, k, lambda, eps, flavor, w0, w1);
            smin = smallest_singular_value(congruence_transform(x_cholesky(g, w0, w1), m));
        }
        bool hit = smin < 1e-10;
        if (hit)
            std::cerr << "[cll] SpectralHit: sigma_min = " << smin << " at k=" << k
                      << " lambda=" << lambda << " eps=" << eps
                      << " (Assumption failure or under-resolution; refine to classify)\n";
        rep.entries.push_back(LapEntry{eps, smin, hit});
        kappa = std::min(kappa, smin);
    }
    rep.kappa_hat = kappa;
    return rep;
}

std::pair<ComplexGridFunction, ComplexGridFunction> degenerate_decompose(
    const ShearProfile& p, const ResolventSolution& base, const ComplexGridFunction& omega0k) {
    const Grid& g = base.psi.grid();
    CutoffFamily cuts(p);
    // u = Psi omega0k / b''
    ComplexGridFunction u(g);
    for (int j = 0; j < g.points(); ++j) {
        double y = g.node(j);
        double psi_cut = cuts.Psi(y);
        u[j] = psi_cut == 0.0 ? Complex(0.0) : psi_cut * omega0k[j] / p.d2b(y);
    }
    ComplexGridFunction phi = base.psi;
    phi -= u;

    HelmholtzOperator helm(g, base.k);
    auto au = helm.apply(u);  // (k^2 - D2) u on interior nodes
    double s = branch_sign(base.iota) * base.eps;
    ComplexGridFunction gsrc(g);
    for (int j = 0; j < g.points(); ++j) {
        double y = g.node(j);
        Complex denom(p.b(y) - base.lambda, s);
        gsrc[j] = (1.0 - cuts.Psi(y)) * omega0k[j] / denom - au[j];
    }
    return {std::move(phi), std::move(gsrc)};
}

ComplexGridFunction solve_dlambda(const ShearProfile& p, const ResolventSolution& base,
                                  const ComplexGridFunction& omega0k) {
    const Grid& g = base.psi.grid();
    auto V = rayleigh_potential(p, g, base.lambda, base.eps, base.iota);
    auto W = resolvent_weight(p, g, base.lambda, base.eps, base.iota);
    std::vector<Complex> rhs(g.n);
    for (int i = 0; i < g.n; ++i)
        rhs[i] = W[i] * W[i] * (omega0k[i + 1] - p.d2b(g.node(i + 1)) * base.psi[i + 1]);
    HelmholtzOperator op(g, base.k, V);
    return op.solve_interior(rhs);
}

ComplexGridFunction solve_d2lambda(const ShearProfile& p, const ResolventSolution& base,
                                   const ComplexGridFunction& dpsi,
                                   const ComplexGridFunction& omega0k) {
    const Grid& g = base.psi.grid();
    auto V = rayleigh_potential(p, g, base.lambda, base.eps, base.iota);
    auto W = resolvent_weight(p, g, base.lambda, base.eps, base.iota);
    std::vector<Complex> rhs(g.n);
    for (int i = 0; i < g.n; ++i) {
        double b2 = p.d2b(g.node(i + 1));
        Complex w2 = W[i] * W[i];
        rhs[i] = 2.0 * w2 * W[i] * (omega0k[i + 1] - b2 * base.psi[i + 1]) -
                 2.0 * b2 * w2 * dpsi[i + 1];
    }
    HelmholtzOperator op(g, base.k, V);
    return op.solve_interior(rhs);
}

JumpResult psi_jump(const ShearProfile& p, Grid g, int k, double lambda,
                    const ComplexGridFunction& omega0k, std::span<const double> eps_schedule) {
    if (lambda == p.b_star()) throw Error("psi_jump: lambda must differ from b(y*)");
    std::vector<double> eps(eps_schedule.begin(), eps_schedule.end());
    std::sort(eps.begin(), eps.end(), std::greater<>());
    if (eps.empty()) throw Error("psi_jump: empty eps schedule");

    const bool real_data = is_real_function(omega0k);
    std::vector<ComplexGridFunction> jumps;
    for (double e : eps) {
        auto plus = solve_rayleigh(p, g, k, lambda, e, Branch::plus, omega0k);
        ComplexGridFunction diff(g);
        if (real_data) {
            // psi- = conj(psi+) for real data; jump = 2i Im psi+
            for (int j = 0; j < g.points(); ++j)
                diff[j] = Complex(0.0, 2.0 * plus.psi[j].imag());
        } else {
            auto minus = solve_rayleigh(p, g, k, lambda, e, Branch::minus, omega0k);
            diff = plus.psi - minus.psi;
        }
        jumps.push_back(std::move(diff));
    }

    if (jumps.size() == 1) return {jumps[0], std::numeric_limits<double>::infinity(), eps};

    // Richardson in eps assuming a leading O(eps) bias; with three or more
    // schedule points the Neville ladder removes the next order as well.
    std::vector<ComplexGridFunction> first;
    for (std::size_t j = 1; j < jumps.size(); ++j) {
        double e0 = eps[j - 1], e1 = eps[j];
        ComplexGridFunction e(g);
        for (int i = 0; i < g.points(); ++i)
            e[i] = (e0 * jumps[j][i] - e1 * jumps[j - 1][i]) / (e0 - e1);
        first.push_back(std::move(e));
    }
    double err;
    if (first.size() >= 2) {
        std::vector<double> diffs;
        for (std::size_t j = 1; j < first.size(); ++j)
            diffs.push_back((first[j] - first[j - 1]).max_abs());
        err = diffs.back();
        for (std::size_t j = 1; j < diffs.size(); ++j) {
            if (diffs[j] > diffs[j - 1] * (1.0 + 1e-9))
                throw NonConvergent("extrapolant differences increase: " +
                                    std::to_string(diffs[j - 1]) + " -> " + std::to_string(diffs[j]));
        }
    } else {
        err = (first.back() - jumps.back()).max_abs();
    }
    if (first.size() < 2) return {first.back(), err, eps};
    ComplexGridFunction second(g);
    {
        std::size_t j = first.size() - 1;
        double e0 = eps[j - 1], e1 = eps[j + 1];
        for (int i = 0; i < g.points(); ++i)
            second[i] = (e0 * first[j][i] - e1 * first[j - 1][i]) / (e0 - e1);
    }
    return {std::move(second), err, eps};
}

SingularParts lambda_singular_parts(const ShearProfile& p, Grid g, int k, double lambda,
                                    const ComplexGridFunction& jump,
                                    const ComplexGridFunction& phi_minus, double eps) {
    (void)k;
    CutoffFamily cuts(p);
    auto geom = p.geometry();
    double delta = geom.delta(lambda);
    if (delta <= 0.0) throw Error("lambda_singular_parts: lambda must differ from b(y*)");
    int m = cuts.m_cut(lambda);
    SingularParts out{ComplexGridFunction(g), ComplexGridFunction(g)};
    for (int j = 0; j < g.points(); ++j) {
        double y = g.node(j);
        double cut = cuts.phi_delta(y, lambda, m);
        if (cut == 0.0) continue;
        double bp = p.db(y);
        double coef = p.d2b(y) / (bp * bp);
        double x = p.b(y) - lambda;
        // boundary value of log from the +i0 side
        Complex logval(std::log(std::abs(x) / (delta * delta)),
                       x < 0.0 ? std::numbers::pi : 0.0);
        out.lambda1[j] = jump[j] * cut * coef * logval;

        Complex inv_pos = 1.0 / Complex(x, eps);
        Complex jump_inv = inv_pos - 1.0 / Complex(x, -eps);  // -2i eps / (x^2 + eps^2)
        out.lambda2[j] = -jump[j] * cut * coef * inv_pos - cut * coef * jump_inv * phi_minus[j];
    }
    return out;
}

}  // namespace cll
