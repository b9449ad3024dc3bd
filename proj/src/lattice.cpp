#include "landau/lattice.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace landau {

MagneticLattice make_lattice(double b, double a, int n) {
    if (!(b > 0) || !(a > 0) || n < 1)
        throw std::invalid_argument("make_lattice: need b>0, a>0, n>=1");
    double flux = b * a * a / (2.0 * M_PI);
    double fr = std::round(flux);
    if (fr < 1.0 || std::abs(flux - fr) > 1e-9 * std::max(1.0, fr)) {
        std::ostringstream os;
        os << "make_lattice: flux b a^2/(2 pi) = " << flux
           << " is not a positive integer";
        throw std::invalid_argument(os.str());
    }
    MagneticLattice lat;
    lat.b = b;
    lat.a = a;
    lat.n = n;
    lat.L = 0.5 * (2 * n + 1) * a;
    lat.flux_per_cell = static_cast<int>(fr);
    lat.degeneracy = lat.flux_per_cell * (2 * n + 1) * (2 * n + 1);
    return lat;
}

Theta reduce_theta(const MagneticLattice& lat, double t1, double t2) {
    const double d = lat.dual_side();
    auto wrap = [d](double t) {
        t = std::fmod(t + 0.5 * d, d);
        if (t <= 0) t += d;
        return t - 0.5 * d;
    };
    return {wrap(t1), wrap(t2)};
}

ThetaRule theta_rule(const MagneticLattice& lat, int per_side) {
    if (per_side < 1) throw std::invalid_argument("theta_rule: per_side >= 1");
    ThetaRule rule;
    const double d = lat.dual_side();
    const double h = d / per_side;
    rule.weight = h * h;
    for (int j = 0; j < per_side; ++j)
        for (int i = 0; i < per_side; ++i)
            rule.nodes.push_back({-0.5 * d + (i + 0.5) * h, -0.5 * d + (j + 0.5) * h});
    return rule;
}

SquareGrid cell_grid(const MagneticLattice& lat, double pts_per_lb) {
    double target = lat.magnetic_length() / pts_per_lb;
    int per_a = static_cast<int>(std::ceil(lat.a / target));
    int n_side = (2 * lat.n + 1) * per_a;
    return SquareGrid::centered(lat.cell_side(), n_side);
}

GelfandResult gelfand_section(const std::function<cplx(const Vec2&)>& f, Theta theta,
                              const MagneticLattice& lat, const SquareGrid& grid,
                              int cutoff, double tail_tol) {
    GelfandResult out;
    out.section = ComplexField(grid);
    const double P = lat.cell_side();
    const double b = lat.b;
    const double pref = 1.0 / std::sqrt(lat.dual_area());
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            Vec2 x(grid.x(i), grid.y(j));
            cplx sum{};
            for (int m2 = -cutoff; m2 <= cutoff; ++m2) {
                for (int m1 = -cutoff; m1 <= cutoff; ++m1) {
                    Vec2 g(P * m1, P * m2);
                    double ph = 0.5 * b * g[0] * g[1] + 0.5 * b * (x[0] * g[1] - x[1] * g[0]) -
                                (theta.t1 * (x[0] + g[0]) + theta.t2 * (x[1] + g[1]));
                    sum += std::exp(cplx(0.0, ph)) * f(x + g);
                }
            }
            out.section.at(i, j) = pref * sum;
        }
    }
    // omitted-shell bound: sample |f| on the first omitted ring of cells
    double fmax = 0.0;
    const int K = cutoff + 1;
    for (int m = -K; m <= K; ++m) {
        for (auto [m1, m2] : {std::pair{m, K}, std::pair{m, -K}, std::pair{K, m}, std::pair{-K, m}}) {
            for (double fx : {-0.5 * P, 0.0, 0.5 * P})
                for (double fy : {-0.5 * P, 0.0, 0.5 * P})
                    fmax = std::max(fmax, std::abs(f(Vec2(P * m1 + fx, P * m2 + fy))));
        }
    }
    out.tail_bound = pref * fmax * (8.0 * K + 4.0) * 2.0;
    if (out.tail_bound > tail_tol && fmax > 0)
        throw std::runtime_error("gelfand_section: truncation tail above tolerance");
    return out;
}

ComplexField trial_bloch(int q, Theta theta, const MagneticLattice& lat,
                         const SquareGrid& grid) {
    const double b = lat.b;
    auto phi = [q, b](const Vec2& x) {
        cplx zb(x[0], -x[1]);
        return std::pow(zb, q) * std::exp(-0.25 * b * x.squaredNorm());
    };
    GelfandResult g = gelfand_section(phi, theta, lat, grid, 3, 1e-6);
    ComplexField out = g.section;
    out.v *= std::sqrt(lat.dual_area());
    return out;
}

} // namespace landau
