#pragma once

#include <span>
#include <vector>

#include "cll/linalg.hpp"

namespace cll {

// Composite Gauss-Legendre rule on [lo, hi] whose panels refine geometrically
// toward a list of target abscissas (critical value b(y*) and the boundary
// values b(0), b(1), where the spectral density has log-singular coefficients)
// and whose panel width is capped so the e^{-ik lambda t} phase stays resolved
// up to kt_max.
struct LambdaQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> panel_edges;
    double max_panel_width = 0.0;

    std::size_t size() const { return nodes.size(); }
};

struct LambdaPanelSpec {
    int base_panels = 32;        // uniform resolution before refinement
    double kt_max = 1.0;         // largest |k| t the rule must support
    double min_width_rel = 1e-6; // geometric refinement floor, relative to |hi-lo|
    int points_per_panel = 4;    // Gauss-Legendre order per panel
};

LambdaQuadrature build_lambda_quadrature(double lo, double hi, std::span<const double> targets,
                                         const LambdaPanelSpec& spec);

// Sum_j w_j e^{-i kt lambda_j} value_j. Throws UnresolvedOscillation when
// max panel width * |kt| > 0.5.
Complex lambda_quadrature(const LambdaQuadrature& q, double kt, std::span<const Complex> values);

// Same oscillatory sum over explicitly given samples (sorted nodes).
Complex lambda_quadrature(std::span<const double> nodes, std::span<const double> weights,
                          std::span<const Complex> values, double kt, double max_panel_width);

}  // namespace cll
