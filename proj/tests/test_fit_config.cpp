#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "landau/config.hpp"
#include "landau/fit.hpp"

using namespace landau;

namespace {

IDSCurve synthetic_curve(const std::function<double(double)>& lnv, double b, int n,
                         double e_lo, double e_hi) {
    IDSCurve c;
    c.b = b;
    c.energies.resize(n);
    c.values.resize(n);
    c.stderrs.resize(n);
    for (int i = 0; i < n; ++i) {
        double E = e_lo * std::pow(e_hi / e_lo, i / (n - 1.0));
        c.energies[i] = E;
        c.values[i] = std::exp(lnv(E));
        c.stderrs[i] = c.values[i] * 1e-4;
    }
    return c;
}

std::string write_temp(const std::string& text) {
    std::string path = "/tmp/idslab_test_config.toml";
    std::ofstream out(path);
    out << text;
    return path;
}

} // namespace

TEST_CASE("lifshitz fit recovers synthetic exponents") {
    const double b = 2.0 * M_PI;
    // power-law shape: ln v = -E^{-1} (varkappa = 4 -> slope magnitude 1)
    IDSCurve pl = synthetic_curve([](double E) { return -1.0 / E; }, b, 30, 0.05, 0.9);
    LifshitzFit f1 = fit_lifshitz(pl, FitFamily::PowerLaw, 4.0, 2.0);
    CHECK(std::abs(f1.slope) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(f1.target == doctest::Approx(1.0));
    CHECK(f1.r2 > 0.999);

    // exponential shape: ln v = -|ln E|^2 (beta = 2 -> slope 2)
    IDSCurve ex = synthetic_curve(
        [](double E) { return -std::pow(std::abs(std::log(E)), 2.0); }, b, 30, 1e-3, 0.5);
    LifshitzFit f2 = fit_lifshitz(ex, FitFamily::Exponential, 4.0, 2.0);
    CHECK(f2.slope == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(f2.target == doctest::Approx(2.0));

    // beta = 1 target is 3
    LifshitzFit f3 = fit_lifshitz(ex, FitFamily::Exponential, 4.0, 1.0);
    CHECK(f3.target == doctest::Approx(3.0));

    // too few usable points
    IDSCurve tiny = synthetic_curve([](double E) { return -1.0 / E; }, b, 4, 0.05, 0.5);
    CHECK_THROWS_AS(fit_lifshitz(tiny, FitFamily::PowerLaw, 4.0, 2.0), std::runtime_error);
}

TEST_CASE("fit skips noisy and saturated points") {
    const double b = 2.0 * M_PI;
    IDSCurve c = synthetic_curve([](double E) { return -1.0 / E; }, b, 30, 0.05, 0.9);
    // poison three points with huge noise; fit must ignore them
    for (int i : {3, 11, 20}) c.stderrs[i] = 10.0 * c.values[i];
    LifshitzFit f = fit_lifshitz(c, FitFamily::PowerLaw, 4.0, 2.0);
    CHECK(f.points_used == 27);
    CHECK(std::abs(f.slope) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("config parsing: defaults, required kappa, schema errors") {
    std::string path = write_temp(
        "# comment\n[lattice]\nb = 6.283185307179586\nn = 1\n\n[disorder]\nkappa = 1.0\nseed = "
        "77\n\n[run]\nsamples = 123\n");
    RunConfig cfg = load_run_config(path);
    CHECK(cfg.kappa == doctest::Approx(1.0));
    CHECK(cfg.seed == 77);
    CHECK(cfg.samples == 123);
    CHECK(cfg.q == 0);                 // default
    CHECK(cfg.family == "powerlaw");   // default

    // kappa omitted -> schema error naming the field
    std::string p2 = write_temp("[disorder]\nseed = 1\n");
    try {
        load_run_config(p2);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("disorder.kappa") != std::string::npos);
    }

    // missing file names the path
    try {
        load_run_config("/nonexistent/nope.toml");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/nope.toml") != std::string::npos);
    }

    // malformed numbers are schema errors
    std::string p3 = write_temp("[disorder]\nkappa = banana\n");
    CHECK_THROWS_AS(load_run_config(p3), ConfigError);
}

TEST_CASE("config hash is stable and sensitive") {
    std::string path = write_temp("[disorder]\nkappa = 1.0\n");
    RunConfig a = load_run_config(path);
    RunConfig b = a;
    CHECK(config_hash(a) == config_hash(b));
    b.samples += 1;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("e-grid from config is log spaced inside (0, 2b)") {
    RunConfig cfg;
    cfg.kappa = 1.0;
    cfg.e_count = 11;
    Eigen::VectorXd g = e_grid_from_config(cfg);
    CHECK(g.size() == 11);
    CHECK(g[0] == doctest::Approx(cfg.e_min_rel * 2.0 * cfg.b));
    CHECK(g[10] == doctest::Approx(cfg.e_max_rel * 2.0 * cfg.b));
    for (int i = 1; i < 11; ++i) CHECK(g[i] > g[i - 1]);
}
