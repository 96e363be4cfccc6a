#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "cll/linalg.hpp"
#include "cll/profile.hpp"

namespace cll {

// Uniform grid on [0,1]: nodes y_j = j h, j = 0..n+1, h = 1/(n+1).
// n counts interior points.
struct Grid {
    int n = 0;
    double h = 0.0;

    static Grid with_interior(int n) { return Grid{n, 1.0 / (n + 1)}; }
    int points() const { return n + 2; }
    double node(int j) const { return j * h; }
    // Index of the interior node nearest to y (clamped to 1..n).
    int nearest_interior(double y) const;
    bool operator==(const Grid&) const = default;
};

// Complex-valued function sampled on all grid nodes (boundaries included).
class ComplexGridFunction {
public:
    ComplexGridFunction() = default;
    explicit ComplexGridFunction(Grid g) : grid_(g), v_(g.points(), Complex(0.0)) {}

    template <class F>
    static ComplexGridFunction sample(Grid g, F&& f) {
        ComplexGridFunction u(g);
        for (int j = 0; j < g.points(); ++j) u.v_[j] = Complex(f(g.node(j)));
        return u;
    }

    const Grid& grid() const { return grid_; }
    int size() const { return static_cast<int>(v_.size()); }
    Complex& operator[](int j) { return v_[j]; }
    const Complex& operator[](int j) const { return v_[j]; }
    std::span<const Complex> values() const { return v_; }
    std::span<Complex> values() { return v_; }
    std::span<const Complex> interior() const { return {v_.data() + 1, static_cast<std::size_t>(grid_.n)}; }

    double max_abs() const;
    ComplexGridFunction& operator+=(const ComplexGridFunction& o);
    ComplexGridFunction& operator-=(const ComplexGridFunction& o);
    ComplexGridFunction& operator*=(Complex c);
    ComplexGridFunction conj() const;

private:
    Grid grid_;
    std::vector<Complex> v_;
};

ComplexGridFunction operator+(ComplexGridFunction a, const ComplexGridFunction& b);
ComplexGridFunction operator-(ComplexGridFunction a, const ComplexGridFunction& b);
ComplexGridFunction operator*(Complex c, ComplexGridFunction a);

// Tridiagonal discretization of  u -> k^2 u - u'' + V u  on interior nodes,
// second-order centered differences, Dirichlet boundary eliminated.
// The LU factorization is computed on first solve and then shared; concurrent
// solves against a factored operator are safe.
class HelmholtzOperator {
public:
    // V holds interior samples (size n) or is empty for V = 0.
    HelmholtzOperator(Grid g, int k, std::vector<Complex> V = {});

    const Grid& grid() const { return grid_; }
    int k() const { return k_; }

    ComplexGridFunction apply(const ComplexGridFunction& u) const;
    // Solves A u = rhs with one step of iterative refinement; relative residual
    // is kept below 1e-10 (throws SingularSystem from the factorization when a
    // pivot collapses).
    ComplexGridFunction solve(const ComplexGridFunction& rhs) const;
    // rhs given on interior nodes only.
    ComplexGridFunction solve_interior(std::span<const Complex> rhs) const;

    // Dense inverse as a matrix on interior nodes (column j = A^{-1} e_j).
    DenseMatrix dense_inverse() const;

private:
    const TridiagonalFactor& factor() const;

    Grid grid_;
    int k_;
    std::vector<Complex> dl_, d_, du_;
    mutable std::shared_ptr<const TridiagonalFactor> factor_;
    mutable std::shared_ptr<std::once_flag> once_;
};

// Composite Simpson integral over [0,1] (O(h^4) for smooth integrands).
Complex integrate(const ComplexGridFunction& f);
double integrate_abs2(const ComplexGridFunction& f);  // integral of |f|^2
// Simpson value of nodal samples against weights; exposed for analysis norms.
std::vector<double> simpson_weights(int points, double h);

// Centered first derivative (one-sided second-order at the boundary).
ComplexGridFunction derivative(const ComplexGridFunction& f);

// Smallest eps the grid can resolve in the critical-layer potential:
//   max(4 h max|b'|, b''(y*) (4h)^2 / 2).
double eps_floor(const Grid& g, const ShearProfile& p);

// Clamps schedule entries to the floor and deduplicates; guarantees at least
// two entries. Result is strictly decreasing.
std::vector<double> clip_eps_schedule(std::span<const double> schedule, double floor);

}  // namespace cll
