#include "landau/projection.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "landau/rng.hpp"
#include "landau/specfun.hpp"

namespace landau {

cplx plane_kernel(int q, double b, const Vec2& x, const Vec2& xp) {
    double wedge = x[0] * xp[1] - x[1] * xp[0];
    double d2 = (x - xp).squaredNorm();
    return b / (2.0 * M_PI) * std::exp(cplx(0.0, -0.5 * b * wedge)) * psi(q, 0.5 * b * d2);
}

cplx fiber_kernel_rect(int q, double b, double P1, double P2, Theta theta,
                       const Vec2& x, const Vec2& xp, int cutoff) {
    const Vec2 d = x - xp;
    const Vec2 s = x + xp;
    cplx sum{};
    for (int m2 = -cutoff; m2 <= cutoff; ++m2) {
        for (int m1 = -cutoff; m1 <= cutoff; ++m1) {
            const double a1 = P1 * m1, a2 = P2 * m2;
            const double dx = d[0] + a1, dy = d[1] + a2;
            const double xi = 0.5 * b * (dx * dx + dy * dy);
            if (xi > 160.0) continue;  // e^{-80} below double noise
            double phase = -(theta.t1 * a1 + theta.t2 * a2) +
                           0.5 * b * (s[0] * a2 - s[1] * a1) + 0.5 * b * a1 * a2;
            sum += psi(q, xi) * std::exp(cplx(0.0, phase));
        }
    }
    double wedge = x[0] * xp[1] - x[1] * xp[0];
    cplx pref = b / (2.0 * M_PI) *
                std::exp(cplx(0.0, theta.t1 * (xp[0] - x[0]) + theta.t2 * (xp[1] - x[1]) -
                                       0.5 * b * wedge));
    return pref * sum;
}

cplx fiber_kernel(int q, const MagneticLattice& lat, Theta theta, const Vec2& x,
                  const Vec2& xp, int cutoff) {
    return fiber_kernel_rect(q, lat.b, lat.cell_side(), lat.cell_side(), theta, x, xp, cutoff);
}

namespace {

// Dense weighted kernel matrix W^{1/2} K W^{1/2} (Hermitian).
Eigen::MatrixXcd kernel_matrix(int q, double b, double P1, double P2, Theta theta,
                               const SquareGrid& grid, int cutoff) {
    const int N = grid.size();
    Eigen::MatrixXcd K(N, N);
    const double w = grid.weight();
    for (int cj = 0; cj < grid.ny; ++cj) {
        for (int ci = 0; ci < grid.nx; ++ci) {
            int col = grid.idx(ci, cj);
            Vec2 xp(grid.x(ci), grid.y(cj));
            for (int rj = 0; rj < grid.ny; ++rj) {
                for (int ri = 0; ri < grid.nx; ++ri) {
                    int row = grid.idx(ri, rj);
                    if (row > col) continue;
                    Vec2 x(grid.x(ri), grid.y(rj));
                    K(row, col) = w * fiber_kernel_rect(q, b, P1, P2, theta, x, xp, cutoff);
                }
            }
        }
    }
    K = K.selfadjointView<Eigen::Upper>();
    return K;
}

Eigen::MatrixXcd random_block(int n, int m, uint64_t seed) {
    Philox rng(seed);
    Eigen::MatrixXcd G(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i)
            G(i, j) = cplx(rng.uniform(i, j, 0, 0) - 0.5, rng.uniform(i, j, 1, 0) - 0.5);
    return G;
}

double operator_norm_defect(const Eigen::MatrixXcd& K, uint64_t seed) {
    // power iteration on M = K^2 - K (Hermitian); ||M||_op = ||P^2-P||
    const int n = static_cast<int>(K.rows());
    Eigen::VectorXcd v = random_block(n, 1, seed ^ 0x9e37u);
    v.normalize();
    double lam = 0.0;
    for (int it = 0; it < 40; ++it) {
        Eigen::VectorXcd y = K * v;
        y = K * y - y;
        double lam_new = std::abs(v.dot(y).real());
        double ny = y.norm();
        if (ny < 1e-300) return 0.0;
        v = y / ny;
        if (lam_new < 1e-12 && it > 2) return lam_new;  // certified far below any tolerance
        if (it > 6 && std::abs(lam_new - lam) < 1e-4 * std::max(1e-30, lam_new)) {
            lam = lam_new;
            break;
        }
        lam = lam_new;
    }
    return lam;
}

} // namespace

FiberProjection build_fiber_projection_rect(int q, Theta theta, double b, double P1,
                                            double P2, int expected_rank,
                                            const SquareGrid& grid,
                                            const ProjectionOptions& opts) {
    const int d = expected_rank;
    const int N = grid.size();
    const int m = std::min(N, d + opts.buffer);

    Eigen::MatrixXcd K = kernel_matrix(q, b, P1, P2, theta, grid, 3);

    // block power iteration; the spectrum clusters near {0,1} so the top
    // block separates after very few sweeps
    Eigen::MatrixXcd Q = random_block(N, m, opts.seed + 0x51u * q);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr0(Q);
    Q = qr0.householderQ() * Eigen::MatrixXcd::Identity(N, m);
    Eigen::VectorXd ritz_prev = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd ritz(m);
    Eigen::MatrixXcd Z;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> small;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        Eigen::MatrixXcd Y = K * Q;
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Y);
        Q = qr.householderQ() * Eigen::MatrixXcd::Identity(N, m);
        Eigen::MatrixXcd A = Q.adjoint() * (K * Q);
        small.compute(0.5 * (A + A.adjoint()));
        ritz = small.eigenvalues().reverse();
        Z = Q * small.eigenvectors().rowwise().reverse();
        // resolved {0,1} clusters certify the invariant subspace immediately
        if (d < m && ritz[d - 1] > 1.0 - 1e-12 && ritz[d] < 1e-12) break;
        if (sweep >= 1 && (ritz - ritz_prev).cwiseAbs().maxCoeff() < 1e-11) break;
        ritz_prev = ritz;
    }

    FiberProjection proj;
    proj.q = q;
    proj.theta = theta;
    proj.grid = grid;
    proj.b = b;
    proj.proj_defect = opts.compute_defect ? operator_norm_defect(K, opts.seed) : 0.0;

    int rank = 0;
    for (int i = 0; i < m; ++i)
        if (ritz[i] > 0.5) ++rank;
    proj.rank = rank;
    proj.top_eigs = ritz.head(std::min(rank, m));
    proj.next_eig = (rank < m) ? ritz[rank] : 0.0;

    std::ostringstream err;
    if (rank != d) {
        err << "build_fiber_projection: rank " << rank << " != degeneracy " << d
            << " (q=" << q << ", defect=" << proj.proj_defect << ")";
        throw std::runtime_error(err.str());
    }
    if (opts.compute_defect && proj.proj_defect > opts.defect_tol) {
        err << "build_fiber_projection: ||P^2-P|| = " << proj.proj_defect
            << " exceeds " << opts.defect_tol << " (grid too coarse, q=" << q << ")";
        throw std::runtime_error(err.str());
    }
    for (int i = 0; i < m; ++i) {
        if (ritz[i] > opts.guard_lo && ritz[i] < opts.guard_hi) {
            err << "build_fiber_projection: eigenvalue " << ritz[i]
                << " inside guard band (grid too coarse, q=" << q << ")";
            throw std::runtime_error(err.str());
        }
    }

    // re-orthonormalize the retained columns
    Eigen::MatrixXcd B = Z.leftCols(rank);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qrb(B);
    proj.basis = qrb.householderQ() * Eigen::MatrixXcd::Identity(N, rank);
    return proj;
}

FiberProjection build_fiber_projection(int q, Theta theta, const MagneticLattice& lat,
                                       const SquareGrid& grid, const ProjectionOptions& opts) {
    return build_fiber_projection_rect(q, theta, lat.b, lat.cell_side(), lat.cell_side(),
                                       lat.degeneracy, grid, opts);
}

Eigen::MatrixXcd reduced_matrix(const FiberProjection& proj, const Eigen::VectorXd& Vgrid) {
    Eigen::MatrixXcd VB = Vgrid.asDiagonal() * proj.basis;
    Eigen::MatrixXcd R = proj.basis.adjoint() * VB;
    return 0.5 * (R + R.adjoint());
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

int eigen_count(const Eigen::VectorXd& evals, double E) {
    int c = 0;
    for (int i = 0; i < evals.size(); ++i)
        if (evals[i] < E) ++c;
    return c;
}

int eigen_count(const Eigen::MatrixXcd& herm, double E) {
    return eigen_count(hermitian_eigenvalues(herm), E);
}

Eigen::MatrixXcd fiber_hamiltonian(const std::vector<FiberProjection>& projs,
                                   const Eigen::VectorXd& Vgrid, double b) {
    int total = 0;
    std::vector<int> off;
    for (const auto& p : projs) {
        off.push_back(total);
        total += p.rank;
    }
    // the exact level eigenspaces are mutually orthogonal; remove the
    // discretization-induced cross-level overlap before compressing
    std::vector<Eigen::MatrixXcd> basis;
    for (size_t a = 0; a < projs.size(); ++a) {
        Eigen::MatrixXcd B = projs[a].basis;
        for (size_t c = 0; c < a; ++c) B -= basis[c] * (basis[c].adjoint() * B);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(B);
        basis.push_back(qr.householderQ() *
                        Eigen::MatrixXcd::Identity(B.rows(), projs[a].rank));
    }
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(total, total);
    for (size_t a = 0; a < projs.size(); ++a) {
        Eigen::MatrixXcd VBa = Vgrid.asDiagonal() * basis[a];
        for (size_t c = 0; c <= a; ++c) {
            Eigen::MatrixXcd blk = basis[c].adjoint() * VBa;  // <c| V |a>
            H.block(off[c], off[a], projs[c].rank, projs[a].rank) = blk;
            if (c != a)
                H.block(off[a], off[c], projs[a].rank, projs[c].rank) = blk.adjoint();
        }
        for (int i = 0; i < projs[a].rank; ++i) H(off[a] + i, off[a] + i) += 2.0 * b * projs[a].q;
    }
    return 0.5 * (H + H.adjoint());
}

} // namespace landau
