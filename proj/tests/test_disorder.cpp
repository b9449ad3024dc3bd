#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "landau/disorder.hpp"

using namespace landau;

TEST_CASE("one-site potential family formulas") {
    OneSitePotential pl = make_potential(PotentialFamily::PowerLaw, 1.0, 4.0, 2.0, {0, 0}, 0.5);
    CHECK(pl(Vec2(0, 0)) == doctest::Approx(1.0));
    CHECK(pl(Vec2(1, 0)) == doctest::Approx(1.0 / 16.0));

    OneSitePotential ex = make_potential(PotentialFamily::Exponential, 1.0, 4.0, 2.0, {0, 0}, 0.5);
    CHECK(ex(Vec2(2, 0)) == doctest::Approx(std::exp(-4.0)));

    OneSitePotential ind = make_potential(PotentialFamily::Indicator, 3.0, 4.0, 2.0, {0, 0}, 0.5);
    CHECK(ind(Vec2(0.4, 0)) == doctest::Approx(3.0));
    CHECK(ind(Vec2(0.6, 0)) == doctest::Approx(0.0));

    CHECK_THROWS_AS(make_potential(PotentialFamily::PowerLaw, 1.0, 1.5, 2.0, {0, 0}, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_potential(PotentialFamily::Exponential, 1.0, 4.0, 2.5, {0, 0}, 0.5),
                    std::invalid_argument);
}

TEST_CASE("coupling law: omega = U^{1/kappa}, P(omega <= E) = E^kappa") {
    // kappa = 1: uniform; empirical CDF at 0.5 within 3 binomial sigma
    {
        DisorderModel dis{1.0, 777};
        const int n = 100000;
        int below = 0;
        for (int i = 0; i < n; ++i)
            if (dis.omega(i % 317, i / 317, 0) <= 0.5) ++below;
        double sigma = std::sqrt(0.25 / n);
        CHECK(std::abs(below / static_cast<double>(n) - 0.5) < 3.0 * sigma);
    }
    // kappa = 2: P(omega <= 0.1) = 0.01 within 3 sigma of 1e6 draws
    {
        DisorderModel dis{2.0, 778};
        const int n = 1000000;
        int below = 0;
        for (int i = 0; i < n; ++i)
            if (dis.omega(i % 1009, i / 1009, 0) <= 0.1) ++below;
        double p = 0.01, sigma = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(below / static_cast<double>(n) - p) < 3.0 * sigma);
    }
    // determinism
    DisorderModel dis{0.5, 779};
    CHECK(dis.omega(-4, 9, 3) == dis.omega(-4, 9, 3));
    CHECK(dis.omega(-4, 9, 3) != dis.omega(-4, 9, 4));
}

TEST_CASE("Kolmogorov-Smirnov of the coupling law at significance 0.01") {
    for (double kappa : {0.5, 1.0, 2.0}) {
        DisorderModel dis{kappa, 4242};
        const int n = 100000;
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) xs[i] = dis.omega(i % 523, i / 523, 1);
        std::sort(xs.begin(), xs.end());
        double dmax = 0.0;
        for (int i = 0; i < n; ++i) {
            double cdf = std::pow(xs[i], kappa);
            dmax = std::max(dmax, std::abs(cdf - (i + 1.0) / n));
            dmax = std::max(dmax, std::abs(cdf - static_cast<double>(i) / n));
        }
        // two-sided critical value at alpha = 0.01
        double crit = 1.628 / std::sqrt(static_cast<double>(n));
        CAPTURE(kappa);
        CHECK(dmax < crit);
    }
}

TEST_CASE("sample_couplings covers the window deterministically") {
    DisorderModel dis{1.0, 5};
    auto cs = sample_couplings(dis, -2, 2, -1, 1, 7);
    CHECK(cs.size() == 15);
    auto cs2 = sample_couplings(dis, -2, 2, -1, 1, 7);
    for (size_t i = 0; i < cs.size(); ++i) CHECK(cs[i].omega == cs2[i].omega);
}

TEST_CASE("alloy field evaluation: trivial cases") {
    MagneticLattice lat = make_lattice(2.0 * M_PI, 1.0, 1);
    OneSitePotential ind = make_potential(PotentialFamily::Indicator, 1.0, 4.0, 2.0, {0, 0}, 0.5);
    DisorderModel dis{1.0, 31};
    AlloyField field(lat, ind, dis);

    // single unit coupling at the origin: value = u there
    double w00 = dis.omega(0, 0, 3);
    double v = field.eval(Vec2(0.2, 0.0), 3);
    // at x=(0.2,0) only gamma=0 covers (indicator radius 1/2)
    CHECK(v == doctest::Approx(w00));

    CHECK(field.sup_W() >= 1.0);
    CHECK(field.sup_bound() < 2.0 * lat.b);  // H4 for this configuration
}

TEST_CASE("alloy field: power-law two-tier evaluation matches a long direct sum") {
    MagneticLattice lat = make_lattice(2.0 * M_PI, 1.0, 1);
    OneSitePotential pl = make_potential(PotentialFamily::PowerLaw, 1.0, 4.0, 2.0, {0, 0}, 0.5);
    DisorderModel dis{1.0, 99};
    AlloyField field(lat, pl, dis);

    Vec2 x(0.37, -0.81);
    const uint32_t s = 11;
    double fast = field.eval(x, s);
    // direct reference: exact couplings to r_cut, mean beyond
    double slow = 0.0;
    int R = static_cast<int>(field.r_cut());
    for (int gy = -R; gy <= R; ++gy)
        for (int gx = -R; gx <= R; ++gx) {
            if (gx * gx + gy * gy > field.r_cut() * field.r_cut()) continue;
            slow += dis.omega(gx, gy, s) * pl(x - Vec2(gx, gy));
        }
    slow += field.mean_tail_field();
    CHECK(fast == doctest::Approx(slow).epsilon(2e-5));
    CHECK(field.residual_std_bound() <= 1e-7);
}

TEST_CASE("periodization: V^per = V on the cell and exactly periodic") {
    MagneticLattice lat = make_lattice(2.0 * M_PI, 1.0, 1);
    OneSitePotential ind = make_potential(PotentialFamily::Indicator, 2.0, 4.0, 2.0, {0, 0}, 0.4);
    DisorderModel dis{1.0, 8};
    AlloyField field(lat, ind, dis);
    PeriodizedField per{&field, 5};

    Vec2 x(0.3, 0.7);
    CHECK(per.eval(x) == doctest::Approx(field.eval(x, 5)));
    double P = lat.cell_side();
    CHECK(per.eval(x + Vec2(P, 0)) == doctest::Approx(per.eval(x)));
    CHECK(per.eval(x + Vec2(-2 * P, P)) == doctest::Approx(per.eval(x)));
    // idempotent wrap
    CHECK(per.wrap(per.wrap(x + Vec2(P, -P))) == per.wrap(x + Vec2(P, -P)));
    // bounded by M
    CHECK(per.eval(x) <= field.sup_bound() + 1e-12);
}

TEST_CASE("H4 checker refuses an overstrong field") {
    MagneticLattice lat = make_lattice(2.0 * M_PI, 1.0, 1);
    OneSitePotential ind =
        make_potential(PotentialFamily::Indicator, 100.0, 4.0, 2.0, {0, 0}, 0.5);
    DisorderModel dis{1.0, 8};
    AlloyField strong(lat, ind, dis);
    CHECK_THROWS_AS(require_h4(strong), std::invalid_argument);
}
