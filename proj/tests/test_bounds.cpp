#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "landau/bounds.hpp"
#include "landau/quad.hpp"
#include "landau/rng.hpp"

using namespace landau;

TEST_CASE("adaptive quadrature sanity") {
    double v = integrate([](double x) { return std::exp(-x); }, 0.0, 1.0, 1e-12);
    CHECK(v == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    double g = integrate([](double x) { return std::exp(-x * x / 2); }, -8.0, 8.0, 1e-12);
    CHECK(g == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("determinant bound: closed-form case q=0, p=0, rho=1") {
    DetBound r = determinant_bound_check(0, 0, 1.0, {1.0});
    CHECK(r.value == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-9));
    CHECK(r.lower == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(r.upper == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.ok);

    DetBound z = determinant_bound_check(2, 3, 2.0, {0.0, 0.0, 0.0});
    CHECK(z.value == doctest::Approx(0.0));
    CHECK(z.ok);
}

TEST_CASE("determinant bound: randomized suite has zero violations") {
    Philox rng(0xbadd);
    int violations = 0;
    for (int t = 0; t < 1000; ++t) {
        int q = static_cast<int>(rng.uniform(t, 0, 0, 0) * 4.999);
        int p = static_cast<int>(rng.uniform(t, 1, 0, 0) * 10.999);
        double rho = 0.1 + rng.uniform(t, 2, 0, 0) * 9.9;
        std::vector<double> c(q + 1);
        double n2 = 0;
        for (int i = 0; i <= q; ++i) {
            c[i] = rng.uniform(t, 3 + i, 0, 0) - 0.5;
            n2 += c[i] * c[i];
        }
        for (auto& v : c) v /= std::sqrt(n2);
        if (!determinant_bound_check(q, p, rho, c).ok) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("delta_q: closed values, recurrence agreement, fin29 bound") {
    DeltaQ d0 = delta_q_recurrence(0, 4);
    CHECK(d0.direct == doctest::Approx(1.0 / 5.0).epsilon(1e-14));
    DeltaQ d1 = delta_q_recurrence(1, 0);
    CHECK(d1.direct == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
    CHECK(d1.recurrence == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
    // Hilbert 3x3 determinant
    DeltaQ d2 = delta_q_recurrence(2, 0);
    CHECK(d2.direct == doctest::Approx(1.0 / 2160.0).epsilon(1e-12));

    for (int q = 0; q <= 6; ++q)
        for (int p = 0; p <= 10; ++p) {
            DeltaQ d = delta_q_recurrence(q, p);
            CHECK(d.rel_diff <= 1e-10);
            if (q <= 4) CHECK(d.bound_ok);
        }
}

TEST_CASE("mass ratio: closed-form Gaussian case and the frozen-constant bound") {
    const double b = 2.0 * M_PI;
    // m=0, q=0, gamma=0: ratio of Gaussian masses
    double eps = 0.5, l = 8.0;
    MassRatio r = mass_ratio_check(0, 0, l, Vec2(0, 0), {1.0}, eps, b);
    double expect = (1.0 - std::exp(-b * eps * eps / 2.0)) / (1.0 - std::exp(-b * l * l));
    CHECK(r.ratio == doctest::Approx(expect).epsilon(1e-6));
    CHECK(r.ratio <= 1.0 + 1e-12);
    CHECK(r.ok);
}

TEST_CASE("mass ratio: random clouds at the frozen constant") {
    const double b = 2.0 * M_PI;
    Philox rng(0xca11u);
    int idx = 0;
    for (int q = 0; q <= 2; ++q)
        for (int m : {8, 16, 32})
            for (double l : {8.0, 16.0}) {
                std::vector<double> c(m + 1);
                double n2 = 0;
                for (int i = 0; i <= m; ++i) {
                    c[i] = rng.uniform(idx, i, 0, 0) - 0.5;
                    n2 += c[i] * c[i];
                }
                for (auto& v : c) v /= std::sqrt(n2);
                Vec2 gamma(l * M_SQRT2 / 2.0 * 0.9, 0.0);
                MassRatio r = mass_ratio_check(q, m, l, gamma, c, 0.5, b);
                CAPTURE(q);
                CAPTURE(m);
                CAPTURE(l);
                CHECK(r.ratio <= 1.0 + 1e-12);
                CHECK(r.ok);
                ++idx;
            }
}

TEST_CASE("schedule check: paper schedules hold for small E, fail for large E") {
    ScheduleInput pl;
    pl.kind = ScheduleCase::PowerLaw;
    pl.varkappa = 4.0;
    pl.varkappa_prime = 4.5;
    ScheduleParams p1 = schedule_check(1e-6, pl);
    CHECK(p1.ok451);
    CHECK(p1.ok452);

    ScheduleParams p2 = schedule_check(0.5, pl);
    bool both = p2.ok451 && p2.ok452;
    CHECK_FALSE(both);
    CHECK(p2.e_star > 0.0);
    CHECK(p2.e_star < 0.5);

    ScheduleInput sg;
    sg.kind = ScheduleCase::SuperGaussian;
    sg.varsigma = 2.0;
    sg.delta = 0.4;
    sg.C = 2.5;  // mu = 1 -> rejected
    ScheduleParams p3 = schedule_check(1e-8, sg);
    CHECK(p3.rejected);

    sg.C = 2.0;
    sg.varsigma = 1.2;
    sg.delta = 0.3;
    ScheduleParams p4 = schedule_check(1e-12, sg);
    CHECK_FALSE(p4.rejected);
    CHECK(p4.mu < 1.0);
}

TEST_CASE("large deviation probe") {
    // t above (N(l)/l^2) omega_plus: the event is sure
    LargeDev d1 = large_deviation_probe(1.0, 2, 3.5, 2000);
    CHECK(d1.empirical == doctest::Approx(1.0));
    CHECK(d1.ok);

    // deep tail: zero hits, one-sided report, bound respected
    LargeDev d2 = large_deviation_probe(1.0, 8, 0.01, 100000);
    CHECK(d2.hits == 0);
    CHECK(d2.one_sided);
    CHECK(d2.upper95 > 0);
    CHECK(d2.empirical <= d2.bound);
    CHECK(d2.ok);

    // monotone in t
    double prev = -1.0;
    for (double t : {0.3, 0.45, 0.6}) {
        LargeDev d = large_deviation_probe(1.0, 2, t, 20000);
        CHECK(d.empirical >= prev);
        prev = d.empirical;
        CHECK(d.ok);
    }

    // Chernoff oracle dominates the empirical tail as well
    LargeDev d3 = large_deviation_probe(1.0, 4, 0.2, 50000);
    CHECK(d3.empirical <= d3.chernoff + 3.0 * std::sqrt(d3.chernoff / 50000.0) + 3e-4);
}

TEST_CASE("combes-thomas: positive rate, eta ordering, admissible epsilon record") {
    auto zero = [](const Vec2&) { return 0.0; };
    // midgap segment on the upper half of the first gap: eta decreases toward
    // the 2b edge and the fitted rate must follow it
    std::vector<double> zs = {1.0, 1.4, 1.8};
    std::vector<double> rates, etas;
    for (double z : zs) {
        DecayFit fit = combes_thomas_probe(1.0, zero, z, 24, 4, 5e-3, 6);
        CHECK(fit.rate > 0.0);
        CHECK(fit.eta < 1.0);
        CHECK(fit.eta > 0.0);
        CHECK(fit.r2 > 0.98);
        rates.push_back(fit.rate);
        etas.push_back(fit.eta);
    }
    for (size_t i = 1; i < zs.size(); ++i) {
        CHECK(etas[i] < etas[i - 1]);
        CHECK(rates[i] < rates[i - 1]);
    }
    // b=1: C(b) = 1, admissible epsilon 1/16
    DecayFit f = combes_thomas_probe(1.0, zero, 1.0, 24, 4, 5e-3, 6);
    CHECK(f.eps_admissible == doctest::Approx(1.0 / 16.0));

    // refusal when eta falls below the requested floor
    CHECK_THROWS_AS(combes_thomas_probe(1.0, zero, 1.0, 24, 4, 0.9), std::runtime_error);
}
