#include "cll/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "cll/errors.hpp"

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <cblas.h>

namespace cll {

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Complex(1.0);
    return m;
}

TridiagonalFactor::TridiagonalFactor(std::vector<Complex> dl, std::vector<Complex> d,
                                     std::vector<Complex> du)
    : n_(static_cast<int>(d.size())), dl_(std::move(dl)), d_(std::move(d)), du_(std::move(du)) {
    double scale = 0.0;
    for (const auto& v : d_) scale = std::max(scale, std::abs(v));
    for (const auto& v : du_) scale = std::max(scale, std::abs(v));
    for (const auto& v : dl_) scale = std::max(scale, std::abs(v));

    du2_.assign(std::max(0, n_ - 2), Complex(0.0));
    ipiv_.assign(n_, 0);
    lapack_int info = LAPACKE_zgttrf(n_, dl_.data(), d_.data(), du_.data(), du2_.data(), ipiv_.data());
    if (info > 0) throw SingularSystem("exact zero pivot at row " + std::to_string(info));
    if (info < 0) throw Error("zgttrf: bad argument " + std::to_string(-info));
    double pmin = std::abs(d_[0]);
    for (const auto& v : d_) pmin = std::min(pmin, std::abs(v));
    if (pmin < 1e-14 * scale)
        throw SingularSystem("pivot " + std::to_string(pmin) + " below 1e-14 * row scale " +
                             std::to_string(scale));
}

std::vector<Complex> TridiagonalFactor::solve(std::span<const Complex> rhs) const {
    std::vector<Complex> x(rhs.begin(), rhs.end());
    lapack_int info = LAPACKE_zgttrs(LAPACK_ROW_MAJOR, 'N', n_, 1, dl_.data(), d_.data(), du_.data(),
                                     du2_.data(), ipiv_.data(), x.data(), 1);
    if (info != 0) throw Error("zgttrs failed: " + std::to_string(info));
    return x;
}

std::vector<Complex> tridiagonal_apply(std::span<const Complex> dl, std::span<const Complex> d,
                                       std::span<const Complex> du, std::span<const Complex> x) {
    const int n = static_cast<int>(d.size());
    std::vector<Complex> y(n);
    for (int i = 0; i < n; ++i) {
        Complex s = d[i] * x[i];
        if (i > 0) s += dl[i - 1] * x[i - 1];
        if (i + 1 < n) s += du[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

double smallest_singular_value(const DenseMatrix& m) {
    DenseMatrix work = m;
    const int n = std::min(m.rows, m.cols);
    std::vector<double> s(n);
    std::vector<double> superb(std::max(1, n - 1));
    lapack_int info = LAPACKE_zgesvd(LAPACK_ROW_MAJOR, 'N', 'N', m.rows, m.cols, work.a.data(),
                                     m.cols, s.data(), nullptr, 1, nullptr, 1, superb.data());
    if (info != 0) throw Error("zgesvd failed: " + std::to_string(info));
    return s[n - 1];
}

EigenResult eigen_real_dense(const std::vector<double>& m, int n) {
    std::vector<double> a = m;
    std::vector<double> wr(n), wi(n), vr(static_cast<std::size_t>(n) * n);
    lapack_int info = LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', 'V', n, a.data(), n, wr.data(), wi.data(),
                                    nullptr, n, vr.data(), n);
    if (info != 0) throw Error("dgeev failed: " + std::to_string(info));
    EigenResult res;
    res.values.resize(n);
    res.vectors = DenseMatrix(n, n);
    for (int j = 0; j < n; ++j) res.values[j] = Complex(wr[j], wi[j]);
    // dgeev packs conjugate pairs as consecutive columns (real, imag).
    for (int j = 0; j < n; ++j) {
        if (wi[j] > 0.0 && j + 1 < n) {
            for (int i = 0; i < n; ++i) {
                double re = vr[static_cast<std::size_t>(i) * n + j];
                double im = vr[static_cast<std::size_t>(i) * n + j + 1];
                res.vectors.at(i, j) = Complex(re, im);
                res.vectors.at(i, j + 1) = Complex(re, -im);
            }
        } else if (wi[j] == 0.0 || (j > 0 && wi[j - 1] > 0)) {
            if (wi[j] == 0.0)
                for (int i = 0; i < n; ++i)
                    res.vectors.at(i, j) = Complex(vr[static_cast<std::size_t>(i) * n + j], 0.0);
        }
    }
    return res;
}

std::vector<double> cholesky_lower(std::vector<double> m, int n) {
    lapack_int info = LAPACKE_dpotrf(LAPACK_ROW_MAJOR, 'L', n, m.data(), n);
    if (info != 0) throw Error("dpotrf failed: " + std::to_string(info));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m[static_cast<std::size_t>(i) * n + j] = 0.0;
    return m;
}

DenseMatrix congruence_transform(const std::vector<double>& lower, const DenseMatrix& m) {
    const int n = m.rows;
    DenseMatrix l(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) l.at(i, j) = Complex(lower[static_cast<std::size_t>(i) * n + j], 0.0);
    DenseMatrix c = m;
    const Complex one(1.0);
    // c := L^T c
    cblas_ztrmm(CblasRowMajor, CblasLeft, CblasLower, CblasTrans, CblasNonUnit, n, n, &one,
                l.a.data(), n, c.a.data(), n);
    // c := c L^{-T}
    cblas_ztrsm(CblasRowMajor, CblasRight, CblasLower, CblasTrans, CblasNonUnit, n, n, &one,
                l.a.data(), n, c.a.data(), n);
    return c;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.rows, b.cols);
    const Complex one(1.0), zero(0.0);
    cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, a.rows, b.cols, a.cols, &one, a.a.data(),
                a.cols, b.a.data(), b.cols, &zero, c.a.data(), c.cols);
    return c;
}

}  // namespace cll
