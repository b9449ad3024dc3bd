#ifndef LANDAU_LATTICE_HPP
#define LANDAU_LATTICE_HPP

#include <functional>

#include "landau/field.hpp"

namespace landau {

// Flux-quantized geometry: cell Lambda_{2L} = (-L,L)^2 with L = (2n+1)a/2,
// magnetic lattice 2L Z^2, dual cell Lambda_{pi/L} of area pi^2/L^2.
struct MagneticLattice {
    double b = 0.0;
    double a = 0.0;
    int n = 0;
    double L = 0.0;
    int flux_per_cell = 0;   // b a^2 / (2 pi)
    int degeneracy = 0;      // 2 b L^2 / pi = flux (2n+1)^2

    double cell_side() const { return 2.0 * L; }
    double dual_side() const { return M_PI / L; }
    double dual_area() const { return dual_side() * dual_side(); }
    double magnetic_length() const { return 1.0 / std::sqrt(b); }
};

// Validates integer flux; throws std::invalid_argument reporting b a^2/(2 pi)
// when it is not a positive integer.
MagneticLattice make_lattice(double b, double a, int n);

// Bloch momentum on the dual torus, components in (-pi/(2L), pi/(2L)].
struct Theta {
    double t1 = 0.0, t2 = 0.0;
    Vec2 vec() const { return Vec2(t1, t2); }
};
Theta reduce_theta(const MagneticLattice& lat, double t1, double t2);

// Midpoint tensor rule over the dual cell; weights sum to pi^2/L^2.
struct ThetaRule {
    std::vector<Theta> nodes;
    double weight = 0.0;  // same for all nodes
};
ThetaRule theta_rule(const MagneticLattice& lat, int per_side);

// Sampling grid for the cell: per-side count is a multiple of (2n+1) so
// a-shifts are grid aligned; spacing <= l_B / pts_per_lb.
SquareGrid cell_grid(const MagneticLattice& lat, double pts_per_lb = 4.0);

// Gelfand section (Uf)(x;theta) = (vol T*)^{-1/2} sum_gamma e^{-i theta (x+gamma)}
// (tau_gamma f)(x) over gamma in 2L Z^2, |gamma|_inf <= cutoff * 2L.
struct GelfandResult {
    ComplexField section;
    double tail_bound;  // bound on the omitted terms, sup over the cell
};
GelfandResult gelfand_section(const std::function<cplx(const Vec2&)>& f, Theta theta,
                              const MagneticLattice& lat, const SquareGrid& grid,
                              int cutoff = 3, double tail_tol = 1e-10);

// Trial Bloch section sum_gamma e^{-i theta (x+gamma)} (tau_gamma phi_q)(x)
// built from phi_q(x) = zbar^q e^{-b|z|^2/4} (no dual-volume prefactor).
ComplexField trial_bloch(int q, Theta theta, const MagneticLattice& lat,
                         const SquareGrid& grid);

} // namespace landau

#endif
