#ifndef LANDAU_FIELD_HPP
#define LANDAU_FIELD_HPP

#include <complex>
#include <functional>
#include <Eigen/Core>

#include "landau/specfun.hpp"

namespace landau {

// Square sampling grid with midpoint nodes: x_i = x0 + (i + 1/2) h.
struct SquareGrid {
    double x0 = 0.0, y0 = 0.0;
    double h = 0.0;
    int nx = 0, ny = 0;

    double x(int i) const { return x0 + (i + 0.5) * h; }
    double y(int j) const { return y0 + (j + 0.5) * h; }
    double weight() const { return h * h; }
    int size() const { return nx * ny; }
    int idx(int i, int j) const { return i + nx * j; }

    static SquareGrid centered(double side, int n) {
        return {-0.5 * side, -0.5 * side, side / n, n, n};
    }
};

// Complex scalar field sampled on a grid, stored column-major as v[idx(i,j)].
struct ComplexField {
    SquareGrid grid;
    Eigen::VectorXcd v;

    ComplexField() = default;
    explicit ComplexField(const SquareGrid& g) : grid(g), v(Eigen::VectorXcd::Zero(g.size())) {}

    cplx& at(int i, int j) { return v[grid.idx(i, j)]; }
    cplx at(int i, int j) const { return v[grid.idx(i, j)]; }

    double norm2() const { return v.squaredNorm() * grid.weight(); }
};

ComplexField sample_field(const SquareGrid& g, const std::function<cplx(const Vec2&)>& f);

// Creation operator a* = -i d/dx1 - A1 - i(-i d/dx2 - A2) in symmetric gauge,
// applied via the spectral derivative of the trigonometric interpolant. The
// field must decay near the grid boundary for the periodic FFT to be accurate.
struct RaiseResult {
    ComplexField field;
    double highband_fraction;  // spectral energy in the top octave
    bool grid_too_coarse;      // highband_fraction above tolerance
};
RaiseResult creation_raise(const ComplexField& f, double b, double coarse_tol = 1e-8);

// Magnetic translation (tau_y f)(x) = e^{i b y1 y2/2} e^{i b (x ^ y)/2} f(x+y).
// y must be grid aligned. If periodic is false, reading outside the sampled
// domain throws std::out_of_range; if true the samples wrap.
ComplexField magnetic_translate(const Vec2& y, const ComplexField& f, double b,
                                bool periodic = false);

} // namespace landau

#endif
