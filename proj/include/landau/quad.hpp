#ifndef LANDAU_QUAD_HPP
#define LANDAU_QUAD_HPP

#include <functional>
#include <vector>
#include <utility>

namespace landau {

// Adaptive 1D integration, Gauss-Kronrod 7-15 with interval bisection.
// abs_tol is an absolute target for the whole interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-9, int max_depth = 40);

// Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Quadrature rule over the disc |x - c| <= R: uniform angles x Gauss-Legendre
// radii. Exact for angular modes up to n_angle-1.
struct DiscRule {
    std::vector<double> x, y, w;
};
DiscRule disc_rule(double cx, double cy, double R, int n_radial = 96, int n_angle = 64);

} // namespace landau

#endif
