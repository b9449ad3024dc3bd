#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "landau/bounds.hpp"
#include "landau/fit.hpp"
#include "landau/io.hpp"
#include "landau/parallel.hpp"

namespace fs = std::filesystem;
using namespace landau;

namespace {

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    int64_t seed = -1;
    int threads = -1;
};

RunConfig load_with_overrides(const CliOverrides& ov) {
    RunConfig cfg = load_run_config(ov.config_path);
    if (ov.seed >= 0) cfg.seed = static_cast<uint64_t>(ov.seed);
    if (ov.threads >= 0) cfg.threads = ov.threads;
    if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
    return cfg;
}

AlloyField field_from_config(const RunConfig& cfg, const MagneticLattice& lat) {
    OneSitePotential u = potential_from_config(cfg);
    DisorderModel dis{cfg.kappa, cfg.seed};
    if (cfg.target_m > 0) {
        AlloyField probe(lat, u, dis);
        u.amp *= cfg.target_m / probe.sup_bound();
    }
    return AlloyField(lat, u, dis);
}

int cmd_run_ids(const CliOverrides& ov) {
    RunConfig cfg = load_with_overrides(ov);
    MagneticLattice lat = lattice_from_config(cfg);
    AlloyField field = field_from_config(cfg, lat);

    EngineOptions opts;
    opts.theta_per_side = cfg.theta_per_side;
    opts.samples = cfg.samples;
    opts.threads = hardware_threads(cfg.threads);
    opts.pts_per_lb = cfg.pts_per_lb;

    IDSCurve curve = reduced_ids(cfg.q, field, e_grid_from_config(cfg), opts);

    fs::create_directories(cfg.out_dir);
    std::string hash = config_hash(cfg);
    write_ids_csv(cfg.out_dir + "/ids_curve.csv", curve, hash);
    write_meta_json(cfg.out_dir + "/meta.json", cfg, curve, hash);
    for (const auto& w : curve.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << cfg.out_dir << "/ids_curve.csv (" << curve.energies.size()
              << " points, M=" << format_double(curve.sup_v) << ", hash=" << hash << ")\n";
    if (curve.starved) {
        std::cerr << "error: tail starvation at the smallest E\n";
        return 1;
    }
    return 0;
}

IDSCurve read_ids_csv(const std::string& path, double b) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open curve file: " + path);
    std::vector<double> E, v, s;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // header row
            continue;
        }
        double a, bb, c;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &bb, &c) != 3)
            throw ConfigError("bad CSV row in " + path + ": " + line);
        E.push_back(a);
        v.push_back(bb);
        s.push_back(c);
    }
    IDSCurve curve;
    curve.energies = Eigen::Map<Eigen::VectorXd>(E.data(), E.size());
    curve.values = Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
    curve.stderrs = Eigen::Map<Eigen::VectorXd>(s.data(), s.size());
    curve.b = b;
    return curve;
}

int cmd_fit_lifshitz(const std::string& curve_path, const std::string& meta_path,
                     const std::string& family, double varkappa, double beta, double sg_delta,
                     const std::string& out_dir) {
    double b = 0.0;
    std::string mp = meta_path;
    if (mp.empty()) mp = (fs::path(curve_path).parent_path() / "meta.json").string();
    {
        std::ifstream in(mp);
        if (!in) throw ConfigError("cannot open meta file: " + mp);
        nlohmann::json j;
        in >> j;
        b = j.at("b").get<double>();
    }
    IDSCurve curve = read_ids_csv(curve_path, b);

    FitFamily fam;
    if (family == "powerlaw") fam = FitFamily::PowerLaw;
    else if (family == "exponential") fam = FitFamily::Exponential;
    else if (family == "supergaussian") fam = FitFamily::SuperGaussian;
    else throw ConfigError("unknown fit family: " + family);

    LifshitzFit fit = fit_lifshitz(curve, fam, varkappa, beta, sg_delta);

    std::cout << "# " << fit.note << "\n";
    std::cout << "family=" << family << " slope=" << format_double(fit.slope)
              << " |slope|=" << format_double(std::abs(fit.slope))
              << " target=" << format_double(fit.target)
              << " deviation=" << format_double(fit.deviation)
              << " R2=" << format_double(fit.r2) << " points=" << fit.points_used
              << " E_window=[" << format_double(fit.e_lo) << "," << format_double(fit.e_hi)
              << "]\n";

    fs::create_directories(out_dir);
    nlohmann::ordered_json j;
    j["family"] = family;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r2"] = fit.r2;
    j["target"] = fit.target;
    j["deviation"] = fit.deviation;
    j["points_used"] = fit.points_used;
    j["e_window"] = {fit.e_lo, fit.e_hi};
    j["note"] = fit.note;
    std::ofstream out(out_dir + "/lifshitz_fit.json", std::ios::binary);
    out << j.dump(2) << "\n";
    return 0;
}

struct SuiteRow {
    std::string probe, input;
    double value = 0, bound = 0;
    bool pass = false;
};

void run_laguerre_suite(std::vector<SuiteRow>& rows) {
    int violations = 0;
    long checked = 0;
    for (int q = 0; q <= 4; ++q)
        for (int j = 1; j <= 300; ++j)
            for (int k = 0; k <= 60; ++k) {
                double xi = 0.05 * k;
                ++checked;
                if (!check_laguerre_upper(q, j, xi)) ++violations;
            }
    rows.push_back({"laguerre_mrs1_sweep", "q<=4,j<=300,xi<=3", static_cast<double>(violations),
                    0.0, violations == 0});
    std::vector<double> grid;
    for (int k = 0; k <= 50; ++k) grid.push_back(0.01 * k);
    for (int q = 1; q <= 3; ++q) {
        int j0 = find_j0_lower(q, grid, 4000);
        rows.push_back({"laguerre_mrs2_j0", "q=" + std::to_string(q), static_cast<double>(j0),
                        0.0, j0 > q});
    }
}

void run_determinant_suite(std::vector<SuiteRow>& rows) {
    Philox rng(0xde7u);
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
    rows.push_back({"determinant_bound", "1000 random (q<=4,p<=10)",
                    static_cast<double>(violations), 0.0, violations == 0});
}

void run_deltaq_suite(std::vector<SuiteRow>& rows) {
    double worst = 0.0;
    bool bounds_ok = true;
    for (int q = 0; q <= 6; ++q)
        for (int p = 0; p <= 10; ++p) {
            DeltaQ d = delta_q_recurrence(q, p);
            worst = std::max(worst, d.rel_diff);
            if (q <= 4 && !d.bound_ok) bounds_ok = false;
        }
    rows.push_back({"delta_q_agreement", "q<=6,p<=10", worst, 1e-10, worst <= 1e-10});
    rows.push_back({"delta_q_fin29", "q<=4,p<=10", bounds_ok ? 1.0 : 0.0, 1.0, bounds_ok});
}

void run_massratio_suite(std::vector<SuiteRow>& rows) {
    const double b = 2.0 * M_PI;
    Philox rng(0xca11u);
    int idx = 0, failures = 0;
    for (int q = 0; q <= 2; ++q) {
        for (int m : {8, 16, 32}) {
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
                if (!r.ok) ++failures;
                ++idx;
            }
        }
    }
    rows.push_back({"mass_ratio", "calibration set, frozen C",
                    static_cast<double>(failures), 0.0, failures == 0});
}

void run_combes_suite(std::vector<SuiteRow>& rows) {
    auto zero = [](const Vec2&) { return 0.0; };
    // upper half of the first gap: both eta and the physical rate decrease
    // toward the 2b edge
    std::vector<double> zs = {1.0, 1.4, 1.8};
    std::vector<double> rates, etas;
    bool all_pos = true;
    for (double z : zs) {
        DecayFit fit = combes_thomas_probe(1.0, zero, z, 24, 4, 5e-3, 6);
        rates.push_back(fit.rate);
        etas.push_back(fit.eta);
        rows.push_back({"combes_thomas_rate", "z=" + format_double(z), fit.rate, 0.0,
                        fit.rate > 0.0});
        if (fit.rate <= 0) all_pos = false;
    }
    bool ordered = true;
    for (size_t i = 1; i < zs.size(); ++i) {
        if ((etas[i] - etas[i - 1]) * (rates[i] - rates[i - 1]) < 0) ordered = false;
    }
    rows.push_back({"combes_thomas_ordering", "3 midgap z, rate tracks eta",
                    ordered ? 1.0 : 0.0, 1.0, ordered && all_pos});
}

void run_schedule_suite(std::vector<SuiteRow>& rows) {
    ScheduleInput pl;
    pl.kind = ScheduleCase::PowerLaw;
    pl.varkappa = 4.0;
    pl.varkappa_prime = 4.5;
    ScheduleParams p1 = schedule_check(1e-6, pl);
    rows.push_back({"schedule_powerlaw", "E=1e-6", (p1.ok451 && p1.ok452) ? 1.0 : 0.0, 1.0,
                    p1.ok451 && p1.ok452});
    ScheduleParams p2 = schedule_check(0.5, pl);
    rows.push_back({"schedule_powerlaw_large_E", "E=0.5 (expect violation, finite E*)",
                    p2.e_star, 0.0, !(p2.ok451 && p2.ok452) && p2.e_star > 0});
    ScheduleInput ex;
    ex.kind = ScheduleCase::Exponential;
    ex.beta = 1.0;
    ex.beta_prime = 1.2;
    ScheduleParams p3 = schedule_check(1e-8, ex);
    rows.push_back({"schedule_exponential", "E=1e-8", (p3.ok451 && p3.ok452) ? 1.0 : 0.0, 1.0,
                    p3.ok451 && p3.ok452});
    ScheduleInput sg;
    sg.kind = ScheduleCase::SuperGaussian;
    sg.varsigma = 2.0;
    sg.delta = 0.4;
    sg.C = 2.0;
    ScheduleParams p4 = schedule_check(1e-8, sg);
    rows.push_back({"schedule_supergaussian_mu", "mu=" + format_double(p4.mu),
                    p4.rejected ? 1.0 : 0.0, 1.0, p4.rejected == (p4.mu >= 1.0)});
    ScheduleInput sg2 = sg;
    sg2.varsigma = 1.5;
    sg2.delta = 0.3;
    ScheduleParams p5 = schedule_check(1e-10, sg2);
    rows.push_back({"schedule_supergaussian", "E=1e-10", (p5.ok451 && p5.ok452) ? 1.0 : 0.0,
                    1.0, !p5.rejected && p5.ok451 && p5.ok452});
}

void run_largedev_suite(std::vector<SuiteRow>& rows) {
    LargeDev d1 = large_deviation_probe(1.0, 8, 0.01, 100000);
    rows.push_back({"large_deviation", "kappa=1,l=8,t=0.01", d1.empirical, d1.bound, d1.ok});
    double prev = -1.0;
    bool monotone = true;
    for (double t : {0.3, 0.45, 0.6}) {
        LargeDev d = large_deviation_probe(1.0, 2, t, 40000);
        if (d.empirical < prev) monotone = false;
        prev = d.empirical;
        rows.push_back({"large_deviation", "kappa=1,l=2,t=" + format_double(t), d.empirical,
                        d.bound, d.ok});
    }
    rows.push_back({"large_deviation_monotone", "l=2, t increasing", monotone ? 1.0 : 0.0, 1.0,
                    monotone});
}

int cmd_verify_bounds(const std::string& suite, const std::string& out_dir) {
    std::vector<SuiteRow> rows;
    bool known = false;
    auto want = [&](const char* name) {
        bool w = suite == "all" || suite == name;
        known = known || suite == name;
        return w;
    };
    if (want("laguerre")) run_laguerre_suite(rows);
    if (want("determinant")) run_determinant_suite(rows);
    if (want("deltaq")) run_deltaq_suite(rows);
    if (want("massratio")) run_massratio_suite(rows);
    if (want("combes")) run_combes_suite(rows);
    if (want("schedule")) run_schedule_suite(rows);
    if (want("largedev")) run_largedev_suite(rows);
    if (!known && suite != "all") {
        std::cerr << "unknown suite selector: " << suite << "\n";
        return 2;
    }

    fs::create_directories(out_dir);
    std::vector<std::vector<std::string>> table;
    int fail_row = -1;
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        table.push_back({r.probe, r.input, format_double(r.value), format_double(r.bound),
                         r.pass ? "1" : "0"});
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.probe << " (" << r.input
                  << ") value=" << format_double(r.value) << " bound=" << format_double(r.bound)
                  << "\n";
        if (!r.pass && fail_row < 0) fail_row = static_cast<int>(i);
    }
    write_table(out_dir + "/bounds_summary.csv", {"# idslab verify-bounds"},
                {"probe", "input", "value", "bound", "pass"}, table);
    if (fail_row >= 0) {
        std::cerr << "violation at row " << fail_row << " (" << rows[fail_row].probe << "), see "
                  << out_dir << "/bounds_summary.csv\n";
        return 1;
    }
    return 0;
}

int cmd_band_sweep(const CliOverrides& ov) {
    RunConfig cfg = load_with_overrides(ov);
    std::function<double(const Vec2&)> W;
    if (cfg.w_family == "zero") {
        W = [](const Vec2&) { return 0.0; };
    } else if (cfg.w_family == "constant") {
        W = [a = cfg.w_amp](const Vec2&) { return a; };
    } else if (cfg.w_family == "bump") {
        W = [a = cfg.w_amp, s = cfg.w_sigma](const Vec2& x) {
            double v = 0.0;
            for (int gy = -2; gy <= 2; ++gy)
                for (int gx = -2; gx <= 2; ++gx) {
                    Vec2 d = x - Vec2(gx, gy);
                    v += a * std::exp(-d.squaredNorm() / (2.0 * s * s));
                }
            return v;
        };
    } else {
        throw ConfigError("config invalid: band.w_family must be zero, constant, or bump");
    }

    BandSweep sweep = band_sweep(cfg.flux_p, cfg.flux_r, W, cfg.band_theta, cfg.band_q_max,
                                 cfg.pts_per_lb, 1e-9);
    fs::create_directories(cfg.out_dir);
    std::vector<std::vector<std::string>> table;
    int unclassifiable = 0;
    for (const auto& bd : sweep.bands) {
        table.push_back({std::to_string(bd.index), format_double(bd.min), format_double(bd.max),
                         bd.constant ? "1" : "0", bd.lower_edge_simple ? "1" : "0",
                         bd.upper_edge_simple ? "1" : "0", bd.overlaps ? "1" : "0"});
        if (bd.overlaps) ++unclassifiable;
    }
    write_table(cfg.out_dir + "/bands.csv",
                {provenance_line(config_hash(cfg)),
                 "# flux p/r = " + std::to_string(cfg.flux_p) + "/" + std::to_string(cfg.flux_r)},
                {"band", "min", "max", "constant", "lower_edge_simple", "upper_edge_simple",
                 "overlaps"},
                table);
    std::cout << "wrote " << cfg.out_dir << "/bands.csv (" << sweep.bands.size() << " bands";
    if (unclassifiable) std::cout << ", " << unclassifiable << " overlapping/unclassifiable";
    std::cout << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"idslab: integrated density of states laboratory for the 2D Landau "
                 "Hamiltonian with alloy-type disorder"};
    app.require_subcommand(1);

    CliOverrides ov;
    std::string fit_curve, fit_meta, fit_family = "powerlaw", suite = "all";
    double fit_vk = 4.0, fit_beta = 2.0, fit_delta = 0.2;
    std::string fit_out = "out";

    auto* run = app.add_subcommand("run-ids", "compute a reduced IDS curve");
    run->add_option("--config", ov.config_path, "config file path")->required();
    run->add_option("--seed", ov.seed, "override disorder seed");
    run->add_option("--out", ov.out_dir, "override output directory");
    run->add_option("--threads", ov.threads, "worker threads (0 = hardware)");

    auto* fit = app.add_subcommand("fit-lifshitz", "fit Lifshitz exponents to a curve");
    fit->add_option("curve", fit_curve, "ids_curve.csv path")->required();
    fit->add_option("--meta", fit_meta, "meta.json path (default: sibling of curve)");
    fit->add_option("--family", fit_family, "powerlaw | exponential | supergaussian");
    fit->add_option("--varkappa", fit_vk, "power-law decay exponent");
    fit->add_option("--beta", fit_beta, "exponential decay exponent");
    fit->add_option("--delta", fit_delta, "super-Gaussian window parameter");
    fit->add_option("--out", fit_out, "output directory");

    auto* vb = app.add_subcommand("verify-bounds", "run inequality probe suites");
    vb->add_option("suite", suite, "laguerre|determinant|deltaq|massratio|combes|schedule|largedev|all");
    vb->add_option("--out", ov.out_dir, "output directory");

    auto* bs = app.add_subcommand("band-sweep", "Floquet band sweep at rational flux");
    bs->add_option("--config", ov.config_path, "config file path")->required();
    bs->add_option("--out", ov.out_dir, "override output directory");

    app.add_subcommand("print-schema", "print the config schema");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run_ids(ov);
        if (fit->parsed())
            return cmd_fit_lifshitz(fit_curve, fit_meta, fit_family, fit_vk, fit_beta, fit_delta,
                                    fit_out);
        if (vb->parsed()) return cmd_verify_bounds(suite, ov.out_dir.empty() ? "out" : ov.out_dir);
        if (bs->parsed()) return cmd_band_sweep(ov);
        std::cout << config_schema();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
