#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cll/cutoffs.hpp"
#include "cll/greens.hpp"
#include "cll/grid.hpp"
#include "cll/profile.hpp"

namespace cll {

enum class Branch { plus = +1, minus = -1 };

inline double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

// One resolvent boundary-value solve: psi solves
//   (k^2 - d^2/dy^2) psi + b''/(b - lambda + i iota eps) psi
//       = omega0k / (b - lambda + i iota eps),   psi(0) = psi(1) = 0.
struct ResolventSolution {
    int k;
    double lambda, eps;
    Branch iota;
    ComplexGridFunction psi;
    double residual;  // relative sup-norm residual of the discrete system
    std::optional<ComplexGridFunction> dpsi, d2psi;   // lambda derivatives
    std::optional<ComplexGridFunction> phi, g_src;    // degenerate split (6.1)-(6.3)
};

// Interior samples of b''/(b - lambda + i iota eps).
std::vector<Complex> rayleigh_potential(const ShearProfile& p, const Grid& g, double lambda,
                                        double eps, Branch iota);

ResolventSolution solve_rayleigh(const ShearProfile& p, Grid g, int k, double lambda, double eps,
                                 Branch iota, const ComplexGridFunction& omega0k);

// T_{k,lambda,eps} g = (k^2 - d^2)^{-1} [ b'' g / (b - lambda + i eps) ],
// realized through the exact discrete inverse (Dirichlet banded solve).
ComplexGridFunction apply_T(const ShearProfile& p, Grid g, int k, double lambda, double eps,
                            const ComplexGridFunction& gfun);

enum class BracketReading { z_variable, y_variable };

// T*_k(lambda + i eps) with the cutoff bracket [1 - phi(./delta0) + phi(./delta)]
// applied in the integration variable (z_variable, default) or in the outer
// variable (y_variable, the literal typography of the definition).
ComplexGridFunction apply_Tstar(const ShearProfile& p, Grid g, int k, double lambda, double eps,
                                const ComplexGridFunction& gfun,
                                BracketReading reading = BracketReading::z_variable);

enum class NormFlavor { H1k, XN, XL };

struct LapEntry {
    double eps;
    double sigma_min;
    bool spectral_hit;  // sigma_min below 1e-10
};

struct LapReport {
    int k;
    double lambda;
    NormFlavor flavor;
    BracketReading reading;
    std::vector<LapEntry> entries;
    double kappa_hat;  // min sigma_min over the schedule
};

// Smallest singular value of I + T (flavor H1k) or I + T* (flavors XN, XL)
// with respect to the chosen norm: H1k through a Cholesky congruence of the
// Hilbert form ||g||^2 + |k|^{-2}||g'||^2, the X flavors through diagonal
// weights sampling the alpha = 0 weight of the definitions (L2 block over
// S_{3(delta+sqrt(eps))}, sup block via the l^8 measure surrogate).
LapReport lap_probe(const ShearProfile& p, Grid g, int k, double lambda,
                    std::span<const double> eps_schedule, NormFlavor flavor,
                    BracketReading reading = BracketReading::z_variable);

// psi = phi + Psi omega0k / b''; returns (phi, g) with g the source of the
// phi-equation (discrete form of (6.3)). The residual of the phi-equation is
// checked against 1e-8.
std::pair<ComplexGridFunction, ComplexGridFunction> degenerate_decompose(
    const ShearProfile& p, const ResolventSolution& base, const ComplexGridFunction& omega0k);

// Solves the lambda-differentiated Rayleigh problems (same operator, new
// right-hand sides); both are the exact lambda-derivatives of the discrete
// solution family.
ComplexGridFunction solve_dlambda(const ShearProfile& p, const ResolventSolution& base,
                                  const ComplexGridFunction& omega0k);
ComplexGridFunction solve_d2lambda(const ShearProfile& p, const ResolventSolution& base,
                                   const ComplexGridFunction& dpsi,
                                   const ComplexGridFunction& omega0k);

struct JumpResult {
    ComplexGridFunction jump;    // lim_{eps->0+} [psi+ - psi-], Richardson extrapolated
    double error_estimate;       // difference of the last two extrapolants (sup norm)
    std::vector<double> eps_used;
};

JumpResult psi_jump(const ShearProfile& p, Grid g, int k, double lambda,
                    const ComplexGridFunction& omega0k, std::span<const double> eps_schedule);

struct SingularParts {
    ComplexGridFunction lambda1;  // psi_k phi_delta (b''/b'^2) log((b-lambda)/delta^2)
    ComplexGridFunction lambda2;  // the (6.21) combination at regularization eps
};

SingularParts lambda_singular_parts(const ShearProfile& p, Grid g, int k, double lambda,
                                    const ComplexGridFunction& jump,
                                    const ComplexGridFunction& phi_minus, double eps);

}  // namespace cll
