#pragma once

#include <complex>
#include <span>
#include <vector>

namespace cll {

using Complex = std::complex<double>;

// Dense row-major complex matrix, sized for the desk-scale probes (n ~ 1000).
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Complex> a;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, Complex(0.0)) {}

    Complex& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const Complex& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static DenseMatrix identity(int n);
};

// Factored complex tridiagonal system (LU with partial pivoting, zgttrf).
// Immutable after construction; solves may run concurrently.
class TridiagonalFactor {
public:
    // dl, d, du are the sub/main/super diagonals of an n x n system.
    // Throws SingularSystem when a pivot falls below 1e-14 times the row scale.
    TridiagonalFactor(std::vector<Complex> dl, std::vector<Complex> d, std::vector<Complex> du);

    int size() const { return n_; }
    // Solves A x = rhs (single right-hand side, in place copy).
    std::vector<Complex> solve(std::span<const Complex> rhs) const;

private:
    int n_;
    std::vector<Complex> dl_, d_, du_, du2_;
    std::vector<int> ipiv_;
};

// y = A x for a tridiagonal A given by its diagonals.
std::vector<Complex> tridiagonal_apply(std::span<const Complex> dl, std::span<const Complex> d,
                                       std::span<const Complex> du, std::span<const Complex> x);

// Smallest singular value of a dense complex matrix (copy is consumed internally).
double smallest_singular_value(const DenseMatrix& m);

// Eigen decomposition of a dense real nonsymmetric matrix (row-major n x n).
// Returns eigenvalues and right eigenvectors as complex columns.
struct EigenResult {
    std::vector<Complex> values;
    DenseMatrix vectors;  // column j is the eigenvector for values[j]
};
EigenResult eigen_real_dense(const std::vector<double>& m, int n);

// Cholesky factor L (lower, row-major) of a real SPD matrix.
std::vector<double> cholesky_lower(std::vector<double> m, int n);

// C := L^T * M * L^{-T} with L real lower-triangular (congruence to the
// norm induced by N = L L^T); used for weighted sigma_min probes.
DenseMatrix congruence_transform(const std::vector<double>& lower, const DenseMatrix& m);

// C := A * B (dense complex).
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace cll
