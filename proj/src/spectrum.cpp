#include "cll/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cll/errors.hpp"
#include "cll/greens.hpp"
#include "cll/parallel.hpp"

namespace cll {

namespace {

constexpr double kEigenResidualMax = 1e-6;
constexpr double kEmbeddedSigmaThreshold = 1e-6;

std::vector<Complex> box_eigenvalues(const ShearProfile& p, Grid g, int k, const ComplexBox& box,
                                     std::vector<double>* residuals) {
    auto L = lk_matrix(p, g, k);
    auto eig = eigen_real_dense(L, g.n);
    // operator scale for the residual normalization
    double scale = 0.0;
    for (double v : L) scale = std::max(scale, std::abs(v));
    std::vector<Complex> out;
    for (int j = 0; j < g.n; ++j) {
        Complex mu = eig.values[j];
        if (std::abs(mu.imag()) < box.im_min) continue;
        if (mu.real() < box.re_lo || mu.real() > box.re_hi) continue;
        // residual ||L v - mu v|| / ||v||
        double num = 0.0, den = 0.0;
        for (int i = 0; i < g.n; ++i) {
            Complex s(0.0);
            for (int m = 0; m < g.n; ++m)
                s += L[static_cast<std::size_t>(i) * g.n + m] * eig.vectors.at(m, j);
            s -= mu * eig.vectors.at(i, j);
            num += std::norm(s);
            den += std::norm(eig.vectors.at(i, j));
        }
        double res = std::sqrt(num / den) / std::max(scale, 1e-300);
        if (res > kEigenResidualMax) continue;
        if (residuals) residuals->push_back(res);
        out.push_back(mu);
    }
    return out;
}

}  // namespace

std::vector<double> lk_matrix(const ShearProfile& p, Grid g, int k) {
    HelmholtzOperator helm(g, k);
    DenseMatrix inv = helm.dense_inverse();
    const int n = g.n;
    std::vector<double> L(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        double yi = g.node(i + 1);
        double b2 = p.d2b(yi);
        for (int j = 0; j < n; ++j)
            L[static_cast<std::size_t>(i) * n + j] = b2 * inv.at(i, j).real();
        L[static_cast<std::size_t>(i) * n + i] += p.b(yi);
    }
    return L;
}

std::vector<DiscreteHit> discrete_eigenvalue_scan(const ShearProfile& p, Grid g, int k,
                                                  const ComplexBox& box) {
    if (box.im_min < 1e-3)
        throw Error("discrete_eigenvalue_scan: box must stay off the real axis (|Im| >= 1e-3)");
    std::vector<double> residuals;
    auto hits = box_eigenvalues(p, g, k, box, &residuals);

    // classification pass at half resolution: genuine eigenvalues stay put
    Grid coarse = Grid::with_interior(g.n / 2);
    auto coarse_hits = box_eigenvalues(p, coarse, k, box, nullptr);

    std::vector<DiscreteHit> out;
    for (std::size_t j = 0; j < hits.size(); ++j) {
        double drift = std::numeric_limits<double>::infinity();
        for (const auto& c : coarse_hits) drift = std::min(drift, std::abs(hits[j] - c));
        bool stable = drift < std::max(1e-4, 0.05 * std::abs(hits[j].imag()));
        out.push_back(DiscreteHit{k, hits[j], residuals[j], drift, stable});
    }
    return out;
}

std::vector<double> profile_level_set(const ShearProfile& p, double lambda) {
    const int scan = 10000;
    std::vector<double> roots;
    double yprev = 0.0, fprev = p.b(yprev) - lambda;
    for (int j = 1; j <= scan; ++j) {
        double y = static_cast<double>(j) / scan;
        double f = p.b(y) - lambda;
        if ((fprev < 0.0) != (f < 0.0)) {
            double a = yprev, b = y;
            for (int it = 0; it < 100; ++it) {
                double m = 0.5 * (a + b);
                if (((p.b(m) - lambda) < 0.0) == (fprev < 0.0)) a = m; else b = m;
            }
            roots.push_back(0.5 * (a + b));
        }
        yprev = y;
        fprev = f;
    }
    return roots;
}

double embedded_eigenvalue_check(const ShearProfile& p, Grid g, int k, double lambda) {
    auto geom = p.geometry();
    double guard = std::pow(2.0 * g.h * p.max_abs_db(), 2);
    if (std::abs(lambda - p.b_star()) < guard)
        throw Error("embedded check excludes |lambda - b(y*)| < (2 h max|b'|)^2; covered by lap_probe");
    auto roots = profile_level_set(p, lambda);
    if (geom.sigma().contains(lambda) && lambda > p.b_star() + guard && roots.empty())
        throw RootFindingFailure("no roots of b = lambda bracketed inside (0,1)");

    const int n = g.n;
    HelmholtzOperator helm(g, k);
    DenseMatrix inv = helm.dense_inverse();
    // inv_{ij} = h * (discrete Green's function)(y_i, z_j); a trapezoid z-integral
    // of F against the Green's kernel is just inv * F on nodal values.

    const int m_pv = 4;  // half-width of the principal-value window, in cells
    std::vector<Complex> mult(n, Complex(0.0));
    for (int j = 0; j < n; ++j) {
        double z = g.node(j + 1);
        bool excluded = false;
        for (double r : roots)
            if (std::abs(z - r) <= m_pv * g.h + 1e-15) excluded = true;
        if (!excluded) mult[j] = p.d2b(z) / (p.b(z) - lambda);
    }
    DenseMatrix K(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) K.at(i, j) = inv.at(i, j) * mult[j];

    // per-row value of the discrete Green's kernel at an off-grid z
    auto kernel_interp = [&](int i, double z) -> Complex {
        double x = z / g.h;
        int jlo = static_cast<int>(std::floor(x));
        double frac = x - jlo;
        Complex v(0.0);
        if (jlo >= 1 && jlo <= n) v += (1.0 - frac) * inv.at(i, jlo - 1) / g.h;
        if (jlo + 1 >= 1 && jlo + 1 <= n) v += frac * inv.at(i, jlo) / g.h;
        return v;
    };
    // spreads coef * psi(z) onto the interior columns by linear interpolation
    auto for_each_psi_node = [&](double z, auto&& fn) {
        double x = z / g.h;
        int jlo = static_cast<int>(std::floor(x));
        double frac = x - jlo;
        if (jlo >= 1 && jlo <= n) fn(jlo - 1, 1.0 - frac);
        if (jlo + 1 >= 1 && jlo + 1 <= n) fn(jlo, frac);
    };

    for (double r : roots) {
        double bp = p.db(r);
        if (std::abs(bp) < 1e-10)
            throw RootFindingFailure("level set tangent at y = " + std::to_string(r));
        // P.V. over |z-r| <= a with b(z)-lambda ~ b'(r)(z-r):
        //   (1/b'(r)) int_0^a [f(r+u) - f(r-u)]/u du,  f = G(y_i,.) b'' psi,
        // trapezoid in u including the u->0 limit 2 f'(r) via the first pair.
        for (int m = 1; m <= m_pv; ++m) {
            double u = m * g.h;
            double cu = (m == m_pv ? 0.5 : 1.0) * g.h / u;  // trapezoid weight / u
            if (m == 1) cu += 0.5;  // u=0 endpoint: (h/2) * [f(r+h)-f(r-h)]/h / h ... = 1/2 pair
            for (int side = 0; side < 2; ++side) {
                double sgn = side == 0 ? 1.0 : -1.0;
                double z = r + sgn * u;
                if (z <= 0.0 || z >= 1.0) continue;
                double b2 = p.d2b(z);
                for_each_psi_node(z, [&](int c, double cw) {
                    double coef = sgn * cu * b2 * cw / bp;
                    for (int i = 0; i < n; ++i) K.at(i, c) += coef * kernel_interp(i, z);
                });
            }
        }
        // i pi b''(r) psi(r) / |b'(r)| point mass
        Complex dcoef = Complex(0.0, std::numbers::pi) * p.d2b(r) / std::abs(bp);
        for_each_psi_node(r, [&](int c, double cw) {
            for (int i = 0; i < n; ++i) K.at(i, c) += dcoef * cw * kernel_interp(i, r);
        });
    }

    for (int i = 0; i < n; ++i) K.at(i, i) += Complex(1.0);
    return smallest_singular_value(K);
}

SpectrumReport assumption_report(const ShearProfile& p, Grid g, int k_max, int jobs) {
    if (k_max <= 0) throw Error("assumption_report: k_max must be >= 1 (k = 0 is excluded)");
    auto geom = p.geometry();
    auto sigma = geom.sigma();
    SpectrumReport rep{k_max, {}, {}, true};

    std::vector<std::vector<DiscreteHit>> hit_slots(k_max);
    std::vector<std::vector<EmbeddedProbe>> probe_slots(k_max);
    parallel_for(jobs, static_cast<std::size_t>(k_max), [&](std::size_t idx) {
        int k = static_cast<int>(idx) + 1;
        ComplexBox box{sigma.lo - 1.0, sigma.hi + 1.0, 1e-3};
        auto hits = discrete_eigenvalue_scan(p, g, k, box);
        for (const auto& h : hits)
            if (h.stable) hit_slots[idx].push_back(h);

        // embedded probes on a default lambda grid (guard region near b(y*) excluded)
        Grid ge = Grid::with_interior(std::min(g.n, 512));
        double guard = std::pow(2.0 * ge.h * p.max_abs_db(), 2) * 2.0;
        const int nl = 6;
        for (int j = 0; j < nl; ++j) {
            double lam = sigma.lo + guard + (sigma.length() - 2.0 * guard) * (j + 0.5) / nl;
            double smin = embedded_eigenvalue_check(p, ge, k, lam);
            Grid gf = Grid::with_interior(std::min(g.n, 768));
            double smin_f = embedded_eigenvalue_check(p, gf, k, lam);
            bool candidate = smin < kEmbeddedSigmaThreshold && smin_f < 2.0 * smin;
            probe_slots[idx].push_back(EmbeddedProbe{k, lam, smin, smin_f, candidate});
        }
    });
    for (int idx = 0; idx < k_max; ++idx) {
        for (auto& h : hit_slots[idx]) rep.discrete_hits.push_back(h);
        for (auto& e : probe_slots[idx]) rep.embedded_probes.push_back(e);
    }
    bool embedded_fail = false;
    for (const auto& e : rep.embedded_probes) embedded_fail |= e.candidate;
    rep.pass = rep.discrete_hits.empty() && !embedded_fail;
    return rep;
}

}  // namespace cll
