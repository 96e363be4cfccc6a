#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cll/grid.hpp"
#include "cll/lambda_quad.hpp"
#include "cll/profile.hpp"
#include "cll/rayleigh.hpp"

namespace cll {

enum class EvolutionMethod { direct, spectral };

// Time history of one Fourier mode: omega and psi snapshots plus derived data.
struct EvolutionTrace {
    int k = 0;
    EvolutionMethod method = EvolutionMethod::direct;
    Grid grid;
    std::vector<double> times;
    std::vector<ComplexGridFunction> omega;
    std::vector<ComplexGridFunction> psi;
    // weighted enstrophy E_k(t) = int |omega|^2 / b'', recorded when b'' > 0
    std::vector<double> energy;
    // near-critical-layer omega from the direct resolvent integrand (spectral
    // route only): diag_y are node indices, diag_omega[t][j] matches them
    std::vector<int> diag_y;
    std::vector<std::vector<Complex>> diag_omega;
};

// Classical four-stage explicit integration of
//   d/dt omega = -i k (b omega - b'' psi),  (d^2-k^2) psi = omega, psi Dirichlet.
// dt above 0.5/(|k| max|b|) raises StabilityViolation. couple_psi = false
// disables the b'' term (free-transport unit-test switch).
EvolutionTrace evolve_direct(const ShearProfile& p, Grid g, int k,
                             const ComplexGridFunction& omega0k, double t_end, double dt,
                             double snapshot_dt, bool couple_psi = true);

struct SpectralEvolveSpec {
    LambdaPanelSpec panels;
    std::vector<double> eps_schedule;   // clipped against eps_floor internally
    bool depletion_diagnostic = true;   // direct-integrand omega near y*
    double diag_halfwidth = 0.25;       // |y - y*| range of the diagnostic
    int diag_points = 40;
};

// Spectral synthesis: psi_k(t,y) = -(1/2 pi i) int_Sigma e^{-i k lambda t}
// [psi^- - psi^+](y,lambda) d lambda, with the jump Richardson-extrapolated in
// eps at fixed lambda before the lambda integral. omega is recovered as
// (d^2-k^2) psi, and near y* additionally through the resolvent integrand.
EvolutionTrace evolve_spectral(const ShearProfile& p, Grid g, int k,
                               const ComplexGridFunction& omega0k, std::span<const double> times,
                               const SpectralEvolveSpec& spec);

// u^x_k = -d_y psi_k, u^y_k = i k psi_k, per snapshot.
std::pair<std::vector<ComplexGridFunction>, std::vector<ComplexGridFunction>> velocities(
    const EvolutionTrace& trace);

// Named initial data for the CLI and tests.
ComplexGridFunction omega0_named(Grid g, const std::string& name);

}  // namespace cll
