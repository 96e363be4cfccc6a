#include "cll/grid.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "cll/errors.hpp"

namespace cll {

int Grid::nearest_interior(double y) const {
    int j = static_cast<int>(std::lround(y / h));
    return std::clamp(j, 1, n);
}

double ComplexGridFunction::max_abs() const {
    double m = 0.0;
    for (const auto& v : v_) m = std::max(m, std::abs(v));
    return m;
}

ComplexGridFunction& ComplexGridFunction::operator+=(const ComplexGridFunction& o) {
    for (std::size_t j = 0; j < v_.size(); ++j) v_[j] += o.v_[j];
    return *this;
}
ComplexGridFunction& ComplexGridFunction::operator-=(const ComplexGridFunction& o) {
    for (std::size_t j = 0; j < v_.size(); ++j) v_[j] -= o.v_[j];
    return *this;
}
ComplexGridFunction& ComplexGridFunction::operator*=(Complex c) {
    for (auto& v : v_) v *= c;
    return *this;
}
ComplexGridFunction ComplexGridFunction::conj() const {
    ComplexGridFunction r(grid_);
    for (std::size_t j = 0; j < v_.size(); ++j) r.v_[j] = std::conj(v_[j]);
    return r;
}

ComplexGridFunction operator+(ComplexGridFunction a, const ComplexGridFunction& b) { return a += b; }
ComplexGridFunction operator-(ComplexGridFunction a, const ComplexGridFunction& b) { return a -= b; }
ComplexGridFunction operator*(Complex c, ComplexGridFunction a) { return a *= c; }

HelmholtzOperator::HelmholtzOperator(Grid g, int k, std::vector<Complex> V)
    : grid_(g), k_(k), once_(std::make_shared<std::once_flag>()) {
    const int n = g.n;
    const double ih2 = 1.0 / (g.h * g.h);
    const double k2 = static_cast<double>(k) * k;
    d_.assign(n, Complex(k2 + 2.0 * ih2));
    dl_.assign(n - 1, Complex(-ih2));
    du_.assign(n - 1, Complex(-ih2));
    if (!V.empty()) {
        for (int i = 0; i < n; ++i) d_[i] += V[i];
    }
}

const TridiagonalFactor& HelmholtzOperator::factor() const {
    std::call_once(*once_, [this] { factor_ = std::make_shared<TridiagonalFactor>(dl_, d_, du_); });
    return *factor_;
}

ComplexGridFunction HelmholtzOperator::apply(const ComplexGridFunction& u) const {
    auto y = tridiagonal_apply(dl_, d_, du_, u.interior());
    ComplexGridFunction r(grid_);
    for (int i = 0; i < grid_.n; ++i) r[i + 1] = y[i];
    return r;
}

ComplexGridFunction HelmholtzOperator::solve(const ComplexGridFunction& rhs) const {
    return solve_interior(rhs.interior());
}

ComplexGridFunction HelmholtzOperator::solve_interior(std::span<const Complex> rhs) const {
    const auto& f = factor();
    auto x = f.solve(rhs);
    // one round of iterative refinement
    auto ax = tridiagonal_apply(dl_, d_, du_, x);
    std::vector<Complex> r(rhs.size());
    double rnorm = 0.0, bnorm = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = rhs[i] - ax[i];
        rnorm = std::max(rnorm, std::abs(r[i]));
        bnorm = std::max(bnorm, std::abs(rhs[i]));
    }
    if (bnorm > 0.0 && rnorm > 1e-13 * bnorm) {
        auto dx = f.solve(r);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
    }
    ComplexGridFunction u(grid_);
    for (int i = 0; i < grid_.n; ++i) u[i + 1] = x[i];
    return u;
}

DenseMatrix HelmholtzOperator::dense_inverse() const {
    const int n = grid_.n;
    DenseMatrix inv(n, n);
    std::vector<Complex> e(n, Complex(0.0));
    for (int j = 0; j < n; ++j) {
        e[j] = Complex(1.0);
        auto col = factor().solve(e);
        e[j] = Complex(0.0);
        for (int i = 0; i < n; ++i) inv.at(i, j) = col[i];
    }
    return inv;
}

std::vector<double> simpson_weights(int points, double h) {
    std::vector<double> w(points, 0.0);
    if (points < 2) return w;
    int intervals = points - 1;
    if (intervals == 1) {
        w[0] = w[1] = 0.5 * h;
        return w;
    }
    if (intervals == 2) {
        w[0] = h / 3.0; w[1] = 4.0 * h / 3.0; w[2] = h / 3.0;
        return w;
    }
    int m = intervals;
    int simpson_end = (m % 2 == 0) ? m : m - 3;
    for (int i = 0; i + 2 <= simpson_end; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if (m % 2 != 0) {
        // 3/8 rule on the trailing three intervals
        int s = m - 3;
        w[s] += 3.0 * h / 8.0;
        w[s + 1] += 9.0 * h / 8.0;
        w[s + 2] += 9.0 * h / 8.0;
        w[s + 3] += 3.0 * h / 8.0;
    }
    return w;
}

Complex integrate(const ComplexGridFunction& f) {
    auto w = simpson_weights(f.size(), f.grid().h);
    Complex s(0.0);
    for (int j = 0; j < f.size(); ++j) s += w[j] * f[j];
    return s;
}

double integrate_abs2(const ComplexGridFunction& f) {
    auto w = simpson_weights(f.size(), f.grid().h);
    double s = 0.0;
    for (int j = 0; j < f.size(); ++j) s += w[j] * std::norm(f[j]);
    return s;
}

ComplexGridFunction derivative(const ComplexGridFunction& f) {
    const Grid& g = f.grid();
    ComplexGridFunction d(g);
    const double ih2 = 1.0 / (2.0 * g.h);
    const int last = g.points() - 1;
    for (int j = 1; j < last; ++j) d[j] = (f[j + 1] - f[j - 1]) * ih2;
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * ih2;
    d[last] = (3.0 * f[last] - 4.0 * f[last - 1] + f[last - 2]) * ih2;
    return d;
}

double eps_floor(const Grid& g, const ShearProfile& p) {
    double a = 4.0 * g.h * p.max_abs_db();
    double b = p.b2_star() * (4.0 * g.h) * (4.0 * g.h) / 2.0;
    return std::max(a, b);
}

std::vector<double> clip_eps_schedule(std::span<const double> schedule, double floor) {
    // "Clipped" means clamped: entries below the floor collapse onto it.
    std::vector<double> out;
    for (double e : schedule) out.push_back(std::max(e, floor));
    std::sort(out.begin(), out.end(), std::greater<>());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-12 * a; }),
              out.end());
    if (out.empty()) out.push_back(floor);
    if (out.size() < 2) out.insert(out.begin(), 4.0 * out.front());
    return out;
}

}  // namespace cll
