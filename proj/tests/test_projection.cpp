#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "landau/projection.hpp"
#include "landau/quad.hpp"

using namespace landau;

namespace {
const double kB = 2.0 * M_PI;
}

TEST_CASE("plane kernel: diagonal value, Hermiticity, reproducing property") {
    for (int q : {0, 1, 3}) {
        CHECK(plane_kernel(q, kB, Vec2(0.3, -0.2), Vec2(0.3, -0.2)).real() ==
              doctest::Approx(kB / (2.0 * M_PI)));
        Vec2 x(0.4, 0.1), xp(-0.2, 0.35);
        cplx a = plane_kernel(q, kB, x, xp);
        cplx b = plane_kernel(q, kB, xp, x);
        CHECK(a.real() == doctest::Approx(b.real()));
        CHECK(a.imag() == doctest::Approx(-b.imag()));
    }
    // projection idempotency: int K(x,y) K(y,x') dy = K(x,x')
    DiscRule rule = disc_rule(0, 0, 8.0 / std::sqrt(kB), 72, 48);
    Vec2 x(0.3, 0.0), xp(-0.1, 0.2);
    for (int q : {0, 1}) {
        cplx acc{};
        for (size_t i = 0; i < rule.w.size(); ++i) {
            Vec2 y(rule.x[i], rule.y[i]);
            acc += rule.w[i] * plane_kernel(q, kB, x, y) * plane_kernel(q, kB, y, xp);
        }
        cplx expect = plane_kernel(q, kB, x, xp);
        CHECK(std::abs(acc - expect) < 1e-4);
    }
}

TEST_CASE("fiber kernel: alpha = 0 term is the plane kernel at theta = 0") {
    MagneticLattice lat = make_lattice(kB, 1.0, 1);
    // far separated points on a huge cell isolate the alpha = 0 term
    MagneticLattice big = make_lattice(kB, 1.0, 7);
    Vec2 x(0.2, 0.1), xp(-0.3, 0.4);
    cplx fk = fiber_kernel(0, big, Theta{0, 0}, x, xp);
    cplx pk = plane_kernel(0, kB, x, xp);
    CHECK(std::abs(fk - pk) < 1e-12);

    // Hermiticity on the working cell
    for (int q : {0, 2}) {
        cplx a = fiber_kernel(q, lat, Theta{0.3, -0.5}, x, xp);
        cplx b = fiber_kernel(q, lat, Theta{0.3, -0.5}, xp, x);
        CHECK(std::abs(a - std::conj(b)) < 1e-10);
    }
}

TEST_CASE("fiber kernel trace approximates the degeneracy") {
    MagneticLattice lat = make_lattice(kB, 1.0, 1);
    SquareGrid g = cell_grid(lat);
    for (int q : {0, 1}) {
        double tr = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                tr += g.weight() *
                      fiber_kernel(q, lat, Theta{0.2, 0.1}, Vec2(g.x(i), g.y(j)),
                                   Vec2(g.x(i), g.y(j)))
                          .real();
        CHECK(std::abs(tr - lat.degeneracy) < 0.02 * lat.degeneracy);
    }
}

TEST_CASE("fiber projection: rank equals degeneracy, defect small, theta independent") {
    MagneticLattice lat = make_lattice(kB, 1.0, 1);
    SquareGrid g = cell_grid(lat);
    FiberProjection p0 = build_fiber_projection(0, Theta{0, 0}, lat, g);
    CHECK(p0.rank == 9);
    CHECK(p0.proj_defect <= 0.05);
    CHECK(p0.basis.cols() == 9);
    // basis orthonormality
    Eigen::MatrixXcd gram = p0.basis.adjoint() * p0.basis;
    CHECK((gram - Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-10);

    ThetaRule rule = theta_rule(lat, 4);
    for (int k = 0; k < 16; k += 5) {
        FiberProjection p = build_fiber_projection(1, rule.nodes[k], lat, g);
        CHECK(p.rank == 9);
    }
}

TEST_CASE("reduced matrix: V = 0 gives zero, constant V gives c I, spectrum in [0, M]") {
    MagneticLattice lat = make_lattice(kB, 1.0, 1);
    SquareGrid g = cell_grid(lat);
    FiberProjection p = build_fiber_projection(0, Theta{0.4, -0.3}, lat, g);

    Eigen::VectorXd zero = Eigen::VectorXd::Zero(g.size());
    CHECK(reduced_matrix(p, zero).norm() == doctest::Approx(0.0));

    Eigen::VectorXd cnst = Eigen::VectorXd::Constant(g.size(), 0.7);
    Eigen::MatrixXcd rc = reduced_matrix(p, cnst);
    CHECK((rc - 0.7 * Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-10);

    OneSitePotential ind = make_potential(PotentialFamily::Indicator, 1.3, 4.0, 2.0, {0, 0}, 0.45);
    DisorderModel dis{1.0, 21};
    AlloyField field(lat, ind, dis);
    Eigen::VectorXd V = field.grid_values(g, 0);
    Eigen::VectorXd ev = hermitian_eigenvalues(reduced_matrix(p, V));
    CHECK(ev.minCoeff() >= -1e-10);
    CHECK(ev.maxCoeff() <= field.sup_bound() + 1e-10);
}

TEST_CASE("eigen_count is strict") {
    Eigen::VectorXd ev(3);
    ev << 0.0, 0.3, 0.7;
    CHECK(eigen_count(ev, 0.0) == 0);
    CHECK(eigen_count(ev, 0.1) == 1);
    CHECK(eigen_count(ev, 0.5) == 2);
    Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(4, 4);
    CHECK(eigen_count(zero, 0.1) == 4);
    CHECK(eigen_count(zero, 0.0) == 0);
}

TEST_CASE("unitary covariance: shifting V by a lattice vector preserves the reduced spectrum") {
    MagneticLattice lat = make_lattice(kB, 1.0, 1);
    SquareGrid g = cell_grid(lat);
    FiberProjection p = build_fiber_projection(0, Theta{0.0, 0.0}, lat, g);

    OneSitePotential ind = make_potential(PotentialFamily::Indicator, 1.0, 4.0, 2.0, {0, 0}, 0.45);
    DisorderModel dis{1.0, 77};
    AlloyField field(lat, ind, dis);
    PeriodizedField per{&field, 2};

    Eigen::VectorXd V1(g.size()), V2(g.size());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            V1[g.idx(i, j)] = per.eval(Vec2(g.x(i), g.y(j)));
            V2[g.idx(i, j)] = per.eval(Vec2(g.x(i) + lat.a, g.y(j)));
        }
    Eigen::VectorXd e1 = hermitian_eigenvalues(reduced_matrix(p, V1));
    Eigen::VectorXd e2 = hermitian_eigenvalues(reduced_matrix(p, V2));
    CHECK((e1 - e2).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("monotonicity: pointwise larger V pushes the lowest eigenvalue up") {
    MagneticLattice lat = make_lattice(kB, 1.0, 1);
    SquareGrid g = cell_grid(lat);
    FiberProjection p = build_fiber_projection(1, Theta{0.2, 0.2}, lat, g);

    OneSitePotential ind = make_potential(PotentialFamily::Indicator, 1.0, 4.0, 2.0, {0, 0}, 0.45);
    DisorderModel dis{1.0, 13};
    AlloyField field(lat, ind, dis);
    Eigen::VectorXd V = field.grid_values(g, 4);
    Eigen::VectorXd ev1 = hermitian_eigenvalues(reduced_matrix(p, V));
    Eigen::VectorXd ev2 = hermitian_eigenvalues(reduced_matrix(p, (1.5 * V.array()).matrix()));
    CHECK(ev1.minCoeff() >= -1e-10);
    CHECK(ev2.minCoeff() >= ev1.minCoeff() - 1e-10);
}

TEST_CASE("fiber hamiltonian: free spectrum and monotone counting") {
    MagneticLattice lat = make_lattice(kB, 1.0, 1);
    SquareGrid g = cell_grid(lat);
    std::vector<FiberProjection> projs;
    for (int q = 0; q <= 2; ++q)
        projs.push_back(build_fiber_projection(q, Theta{0.1, -0.1}, lat, g));

    Eigen::VectorXd zero = Eigen::VectorXd::Zero(g.size());
    Eigen::MatrixXcd h = fiber_hamiltonian(projs, zero, lat.b);
    Eigen::VectorXd ev = hermitian_eigenvalues(h);
    CHECK(ev.size() == 27);
    // free Landau spectrum: 9 eigenvalues at each of 0, 2b, 4b
    CHECK(eigen_count(ev, 2.0 * lat.b - 0.1) == 9);
    CHECK(eigen_count(ev, 4.0 * lat.b - 0.1) == 18);
    CHECK(std::abs(ev[0]) < 1e-9);
    CHECK(std::abs(ev[9] - 2.0 * lat.b) < 1e-9);

    // counting non-decreasing in E
    OneSitePotential ind = make_potential(PotentialFamily::Indicator, 1.0, 4.0, 2.0, {0, 0}, 0.45);
    DisorderModel dis{1.0, 5};
    AlloyField field(lat, ind, dis);
    Eigen::VectorXd V = field.grid_values(g, 0);
    Eigen::VectorXd evv = hermitian_eigenvalues(fiber_hamiltonian(projs, V, lat.b));
    int prev = 0;
    for (double E = 0.0; E < 5.0 * lat.b; E += 0.5) {
        int c = eigen_count(evv, E);
        CHECK(c >= prev);
        prev = c;
    }
}
