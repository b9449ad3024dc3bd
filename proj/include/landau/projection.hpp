#ifndef LANDAU_PROJECTION_HPP
#define LANDAU_PROJECTION_HPP

#include <Eigen/Dense>

#include "landau/disorder.hpp"
#include "landau/lattice.hpp"

namespace landau {

// Landau-level projection kernel on the plane:
// K_{q,b}(x,x') = (b/2pi) e^{-i(b/2) x^x'} Psi_q(b|x-x'|^2/2).
cplx plane_kernel(int q, double b, const Vec2& x, const Vec2& xp);

// Fibered kernel on the cell, lattice sum over alpha in 2L Z^2 with the
// magnetic phases; terms with Gaussian argument beyond the working range are
// skipped (they are below double precision).
cplx fiber_kernel(int q, const MagneticLattice& lat, Theta theta, const Vec2& x,
                  const Vec2& xp, int cutoff = 3);

// Same kernel over a general rectangular cell P1 x P2 with integer flux
// b P1 P2 / (2 pi); used by rational-flux band sweeps on r Z + Z.
cplx fiber_kernel_rect(int q, double b, double P1, double P2, Theta theta,
                       const Vec2& x, const Vec2& xp, int cutoff = 3);

// Discretized fiber projection p_q(theta): weighted kernel matrix
// W^{1/2} K W^{1/2}, rank-d range basis from a block eigensolve.
struct FiberProjection {
    int q = 0;
    Theta theta;
    SquareGrid grid;
    double b = 0.0;
    Eigen::MatrixXcd basis;      // grid.size() x d, orthonormal in l^2
    Eigen::VectorXd top_eigs;    // leading block eigenvalues (descending)
    double next_eig = 0.0;       // first eigenvalue below the retained block
    double proj_defect = 0.0;    // ||P^2 - P||_op estimate
    int rank = 0;
};

struct ProjectionOptions {
    int buffer = 12;             // extra block columns beyond d
    double defect_tol = 0.05;    // accept threshold for ||P^2-P||
    double guard_lo = 0.1;       // no eigenvalue may land in [guard_lo, guard_hi]
    double guard_hi = 0.9;
    int max_sweeps = 24;
    bool compute_defect = true;  // the defect norm costs extra matvecs
    uint64_t seed = 0x1db5a1u;   // block start vectors (deterministic)
};

FiberProjection build_fiber_projection(int q, Theta theta, const MagneticLattice& lat,
                                       const SquareGrid& grid,
                                       const ProjectionOptions& opts = {});

FiberProjection build_fiber_projection_rect(int q, Theta theta, double b, double P1,
                                            double P2, int expected_rank,
                                            const SquareGrid& grid,
                                            const ProjectionOptions& opts = {});

// r_q(theta) = p_q V^per p_q compressed to the range basis; Hermitised.
Eigen::MatrixXcd reduced_matrix(const FiberProjection& proj, const Eigen::VectorXd& Vgrid);

// Eigenvalues of a Hermitian matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m);

// #{eigenvalues < E}, strict, multiplicity counted.
int eigen_count(const Eigen::VectorXd& evals_ascending, double E);
int eigen_count(const Eigen::MatrixXcd& herm, double E);

// h(theta) compressed to the span of levels 0..Q_max: diagonal blocks
// 2bq I + B_q* V B_q, off-diagonal blocks B_q* V B_{q'}. Counting functions
// from it are trustworthy only below 2 b Q_max - sup V.
Eigen::MatrixXcd fiber_hamiltonian(const std::vector<FiberProjection>& projs,
                                   const Eigen::VectorXd& Vgrid, double b);

} // namespace landau

#endif
