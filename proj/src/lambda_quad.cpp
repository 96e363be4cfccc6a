#include "cll/lambda_quad.hpp"

#include <algorithm>
#include <cmath>

#include "cll/errors.hpp"

namespace cll {

namespace {

// Gauss-Legendre nodes/weights on [-1,1].
const double kGL4x[] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                        0.8611363115940526};
const double kGL4w[] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                        0.3478548451374538};
const double kGL2x[] = {-0.5773502691896257, 0.5773502691896257};
const double kGL2w[] = {1.0, 1.0};

void subdivide(double a, double b, std::span<const double> targets, double cap, double min_width,
               std::vector<double>& edges) {
    double w = b - a;
    bool refine = w > cap;
    if (!refine && w > min_width) {
        // refine geometrically toward any target touching this panel
        for (double t : targets) {
            double dist = std::max(0.0, std::max(t - b, a - t));
            if (w > std::max(dist, min_width)) {
                refine = true;
                break;
            }
        }
    }
    if (refine && w > min_width) {
        double m = 0.5 * (a + b);
        subdivide(a, m, targets, cap, min_width, edges);
        subdivide(m, b, targets, cap, min_width, edges);
    } else {
        edges.push_back(b);
    }
}

}  // namespace

LambdaQuadrature build_lambda_quadrature(double lo, double hi, std::span<const double> targets,
                                         const LambdaPanelSpec& spec) {
    LambdaQuadrature q;
    if (hi <= lo) return q;
    const double span = hi - lo;
    const double cap = std::min(span / std::max(1, spec.base_panels),
                                0.4 / std::max(1.0, spec.kt_max));
    const double min_width = span * spec.min_width_rel;
    std::vector<double> tlist(targets.begin(), targets.end());

    q.panel_edges.push_back(lo);
    subdivide(lo, hi, tlist, cap, min_width, q.panel_edges);

    const double* gx = spec.points_per_panel >= 4 ? kGL4x : kGL2x;
    const double* gw = spec.points_per_panel >= 4 ? kGL4w : kGL2w;
    const int npts = spec.points_per_panel >= 4 ? 4 : 2;
    for (std::size_t p = 0; p + 1 < q.panel_edges.size(); ++p) {
        double a = q.panel_edges[p], b = q.panel_edges[p + 1];
        double c = 0.5 * (a + b), r = 0.5 * (b - a);
        q.max_panel_width = std::max(q.max_panel_width, b - a);
        for (int i = 0; i < npts; ++i) {
            q.nodes.push_back(c + r * gx[i]);
            q.weights.push_back(r * gw[i]);
        }
    }
    return q;
}

Complex lambda_quadrature(std::span<const double> nodes, std::span<const double> weights,
                          std::span<const Complex> values, double kt, double max_panel_width) {
    if (max_panel_width * std::abs(kt) > 0.5)
        throw UnresolvedOscillation("panel width " + std::to_string(max_panel_width) + " * |k|t " +
                                    std::to_string(std::abs(kt)) + " > 0.5; densify the rule");
    Complex s(0.0);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        double phase = -kt * nodes[j];
        s += weights[j] * Complex(std::cos(phase), std::sin(phase)) * values[j];
    }
    return s;
}

Complex lambda_quadrature(const LambdaQuadrature& q, double kt, std::span<const Complex> values) {
    return lambda_quadrature(q.nodes, q.weights, values, kt, q.max_panel_width);
}

}  // namespace cll
