#include "landau/ids.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "landau/parallel.hpp"
#include "landau/rng.hpp"

namespace landau {

namespace {

std::vector<FiberProjection> build_theta_projections(int q, const MagneticLattice& lat,
                                                     const SquareGrid& grid,
                                                     const ThetaRule& rule, int threads,
                                                     bool compute_defect) {
    ProjectionOptions popt;
    popt.compute_defect = compute_defect;
    std::vector<FiberProjection> projs(rule.nodes.size());
    parallel_for(static_cast<int>(rule.nodes.size()), threads, [&](int t, int) {
        projs[t] = build_fiber_projection(q, rule.nodes[t], lat, grid, popt);
    });
    return projs;
}

void check_e_grid(const Eigen::VectorXd& e_grid, double gap, double M) {
    if (e_grid.size() == 0) throw std::invalid_argument("ids: empty E-grid");
    for (int i = 1; i < e_grid.size(); ++i)
        if (e_grid[i] < e_grid[i - 1])
            throw std::invalid_argument("ids: E-grid must be non-decreasing");
    if (e_grid[0] <= 0.0 || e_grid[e_grid.size() - 1] >= gap - M) {
        std::ostringstream os;
        os << "ids: E-grid must lie inside (0, 2b - M) = (0, " << gap - M << ")";
        throw std::invalid_argument(os.str());
    }
}

} // namespace

IDSCurve reduced_ids(int q, const AlloyField& field, const Eigen::VectorXd& e_grid,
                     const EngineOptions& opts) {
    const MagneticLattice& lat = field.lattice();
    require_h4(field);
    const double M = field.sup_bound();
    check_e_grid(e_grid, 2.0 * lat.b, M);

    const SquareGrid grid = cell_grid(lat, opts.pts_per_lb);
    const ThetaRule rule = theta_rule(lat, opts.theta_per_side);
    const int threads = hardware_threads(opts.threads);
    auto projs = build_theta_projections(q, lat, grid, rule, threads, true);

    const int ne = static_cast<int>(e_grid.size());
    const int nth = static_cast<int>(rule.nodes.size());
    const int S = opts.samples;

    // per-worker exact integer accumulators; merged sums are order-free
    std::vector<std::vector<int64_t>> sum_w(threads, std::vector<int64_t>(ne, 0));
    std::vector<std::vector<int64_t>> sumsq_w(threads, std::vector<int64_t>(ne, 0));
    std::vector<std::vector<int64_t>> nonzero_w(threads, std::vector<int64_t>(ne, 0));

    parallel_for(S, threads, [&](int s, int w) {
        Eigen::VectorXd V = field.grid_values(grid, static_cast<uint32_t>(s));
        std::vector<int64_t> T(ne, 0);
        for (int t = 0; t < nth; ++t) {
            Eigen::VectorXd ev = hermitian_eigenvalues(reduced_matrix(projs[t], V));
            for (int e = 0; e < ne; ++e) T[e] += eigen_count(ev, e_grid[e]);
        }
        for (int e = 0; e < ne; ++e) {
            sum_w[w][e] += T[e];
            sumsq_w[w][e] += T[e] * T[e];
            if (T[e] > 0) nonzero_w[w][e] += 1;
        }
    });

    IDSCurve curve;
    curve.energies = e_grid;
    curve.values.resize(ne);
    curve.stderrs.resize(ne);
    curve.q = q;
    curve.samples = S;
    curve.theta_nodes = nth;
    curve.seed = field.disorder().seed;
    curve.b = lat.b;
    curve.sup_v = M;

    const double scale = rule.weight / (4.0 * M_PI * M_PI);
    int64_t nz0 = 0;
    for (int e = 0; e < ne; ++e) {
        int64_t sum = 0, sumsq = 0, nz = 0;
        for (int w = 0; w < threads; ++w) {
            sum += sum_w[w][e];
            sumsq += sumsq_w[w][e];
            nz += nonzero_w[w][e];
        }
        double mean = static_cast<double>(sum) / S;
        double var = std::max(0.0, static_cast<double>(sumsq) / S - mean * mean);
        curve.values[e] = scale * mean;
        curve.stderrs[e] = scale * std::sqrt(var / S);
        if (e == 0) nz0 = nz;
    }
    if (nz0 < std::min<int64_t>(100, S)) {
        curve.starved = true;
        std::ostringstream os;
        os << "tail starvation: only " << nz0 << " of " << S
           << " samples contribute a nonzero count at E = " << e_grid[0];
        curve.warnings.push_back(os.str());
    }
    return curve;
}

IDSCurve periodic_ids(const AlloyField& field, const Eigen::VectorXd& e_grid, int q_max,
                      const EngineOptions& opts) {
    const MagneticLattice& lat = field.lattice();
    const double M = field.sup_bound();
    if (q_max < 1) throw std::invalid_argument("periodic_ids: q_max >= 1");

    const SquareGrid grid = cell_grid(lat, opts.pts_per_lb);
    const ThetaRule rule = theta_rule(lat, opts.theta_per_side);
    const int threads = hardware_threads(opts.threads);

    std::vector<std::vector<FiberProjection>> projs(rule.nodes.size());
    parallel_for(static_cast<int>(rule.nodes.size()), threads, [&](int t, int) {
        ProjectionOptions popt;
        for (int q = 0; q <= q_max; ++q)
            projs[t].push_back(build_fiber_projection(q, rule.nodes[t], lat, grid, popt));
    });

    const int ne = static_cast<int>(e_grid.size());
    const int nth = static_cast<int>(rule.nodes.size());
    const int S = opts.samples;

    std::vector<std::vector<int64_t>> sum_w(threads, std::vector<int64_t>(ne, 0));
    std::vector<std::vector<int64_t>> sumsq_w(threads, std::vector<int64_t>(ne, 0));

    parallel_for(S, threads, [&](int s, int w) {
        Eigen::VectorXd V = field.grid_values(grid, static_cast<uint32_t>(s));
        std::vector<int64_t> T(ne, 0);
        for (int t = 0; t < nth; ++t) {
            Eigen::VectorXd ev = hermitian_eigenvalues(fiber_hamiltonian(projs[t], V, lat.b));
            for (int e = 0; e < ne; ++e) T[e] += eigen_count(ev, e_grid[e]);
        }
        for (int e = 0; e < ne; ++e) {
            sum_w[w][e] += T[e];
            sumsq_w[w][e] += T[e] * T[e];
        }
    });

    IDSCurve curve;
    curve.energies = e_grid;
    curve.values.resize(ne);
    curve.stderrs.resize(ne);
    curve.q = -1;
    curve.samples = S;
    curve.theta_nodes = nth;
    curve.seed = field.disorder().seed;
    curve.b = lat.b;
    curve.sup_v = M;
    const double scale = rule.weight / (4.0 * M_PI * M_PI);
    for (int e = 0; e < ne; ++e) {
        int64_t sum = 0, sumsq = 0;
        for (int w = 0; w < threads; ++w) {
            sum += sum_w[w][e];
            sumsq += sumsq_w[w][e];
        }
        double mean = static_cast<double>(sum) / S;
        double var = std::max(0.0, static_cast<double>(sumsq) / S - mean * mean);
        curve.values[e] = scale * mean;
        curve.stderrs[e] = scale * std::sqrt(var / S);
    }
    double trust = 2.0 * lat.b * q_max - M;
    if (e_grid[ne - 1] >= trust) {
        std::ostringstream os;
        os << "level truncation: counts above E = " << trust
           << " are unreliable with Q_max = " << q_max;
        curve.warnings.push_back(os.str());
    }
    return curve;
}

IncrementBracket ids_increment(int q, const AlloyField& field, const Eigen::VectorXd& e_grid,
                               double d1, double d2, const EngineOptions& opts) {
    if (!(d1 > 0 && d1 < 1) || !(d2 > 1))
        throw std::invalid_argument("ids_increment: need d1 in (0,1), d2 in (1,inf)");
    IncrementBracket br;
    br.d1 = d1;
    br.d2 = d2;
    br.lower = reduced_ids(q, field, (d1 * e_grid.array()).matrix(), opts);
    br.upper = reduced_ids(q, field, (d2 * e_grid.array()).matrix(), opts);
    br.lower.energies = e_grid;
    br.upper.energies = e_grid;
    return br;
}

std::vector<std::vector<SandwichReport>> sandwich_check_suite(
    const AlloyField& field, int n_samples, const std::vector<double>& e_values,
    const std::vector<int>& qs, const std::vector<int>& q_maxes, double c0, double c1,
    double c2, const EngineOptions& opts) {
    const MagneticLattice& lat = field.lattice();
    require_h4(field);
    const double M = field.sup_bound();
    const double gap = 2.0 * lat.b;
    int q_top = 0;
    for (int m : q_maxes) q_top = std::max(q_top, m);
    for (int q : qs) {
        if (q == 0) {
            if (!(c0 > 1.0 + M / gap))
                throw std::invalid_argument("sandwich_check: need c0 > 1 + M/(2b)");
        } else {
            if (!(c1 > 0 && c1 < 1.0 - M / gap) || !(c2 > 1.0 + M / gap))
                throw std::invalid_argument(
                    "sandwich_check: need c1 < 1 - M/(2b) < 1 + M/(2b) < c2");
        }
        for (int m : q_maxes)
            if (m < q + 1) throw std::invalid_argument("sandwich_check: q_max must exceed q");
    }

    const SquareGrid grid = cell_grid(lat, opts.pts_per_lb);
    const int threads = hardware_threads(opts.threads);
    const Philox theta_rng(opts.theta_seed);

    std::vector<std::vector<SandwichReport>> reports(qs.size());
    for (size_t qi = 0; qi < qs.size(); ++qi) {
        for (int m : q_maxes) {
            SandwichReport rep;
            rep.c0 = c0;
            rep.c1 = c1;
            rep.c2 = c2;
            rep.q_max = m;
            rep.rows.resize(static_cast<size_t>(n_samples) * e_values.size());
            reports[qi].push_back(std::move(rep));
        }
    }

    parallel_for(n_samples, threads, [&](int s, int) {
        double u1 = theta_rng.site_uniform(s, 0, 0xabu);
        double u2 = theta_rng.site_uniform(s, 1, 0xabu);
        Theta th = {lat.dual_side() * (u1 - 0.5), lat.dual_side() * (u2 - 0.5)};
        ProjectionOptions popt;
        popt.compute_defect = false;
        std::vector<FiberProjection> projs;
        for (int qq = 0; qq <= q_top; ++qq)
            projs.push_back(build_fiber_projection(qq, th, lat, grid, popt));
        Eigen::VectorXd V = field.grid_values(grid, static_cast<uint32_t>(s));
        for (size_t mi = 0; mi < q_maxes.size(); ++mi) {
            std::vector<FiberProjection> sub(projs.begin(), projs.begin() + q_maxes[mi] + 1);
            Eigen::VectorXd evh = hermitian_eigenvalues(fiber_hamiltonian(sub, V, lat.b));
            for (size_t qi = 0; qi < qs.size(); ++qi) {
                const int q = qs[qi];
                Eigen::VectorXd evr = hermitian_eigenvalues(reduced_matrix(projs[q], V));
                for (size_t e = 0; e < e_values.size(); ++e) {
                    double E = e_values[e];
                    SandwichRow row;
                    row.sample = s;
                    row.q = q;
                    row.t1 = th.t1;
                    row.t2 = th.t2;
                    row.E = E;
                    if (q == 0) {
                        row.n_lower = eigen_count(evr, E);
                        row.n_mid = eigen_count(evh, E);
                        row.n_upper = eigen_count(evr, c0 * E);
                    } else {
                        row.n_lower = eigen_count(evr, c1 * E);
                        row.n_mid = eigen_count(evh, 2.0 * lat.b * q + E) -
                                    eigen_count(evh, 2.0 * lat.b * q);
                        row.n_upper = eigen_count(evr, c2 * E);
                    }
                    row.ok_lower = row.n_lower <= row.n_mid;
                    row.ok_upper = row.n_mid <= row.n_upper;
                    reports[qi][mi].rows[s * e_values.size() + e] = row;
                }
            }
        }
    });

    for (auto& per_q : reports) {
        for (auto& rep : per_q) {
            for (const auto& row : rep.rows)
                if (!row.ok_lower || !row.ok_upper) ++rep.violations;
            rep.violation_fraction =
                static_cast<double>(rep.violations) / static_cast<double>(rep.rows.size());
        }
    }
    return reports;
}

SandwichReport sandwich_check(int q, const AlloyField& field, int n_samples,
                              const std::vector<double>& e_values, int q_max,
                              double c0, double c1, double c2, const EngineOptions& opts) {
    return sandwich_check_suite(field, n_samples, e_values, {q}, {q_max}, c0, c1, c2,
                                opts)[0][0];
}

TrialBound trial_lower_bound(int q, const AlloyField& field, const Eigen::VectorXd& e_grid,
                             int n_samples, double c, const EngineOptions& opts) {
    const MagneticLattice& lat = field.lattice();
    const OneSitePotential& u = field.potential();
    const DisorderModel& dis = field.disorder();
    const SquareGrid grid = cell_grid(lat, opts.pts_per_lb);

    ComplexField phi = trial_bloch(q, Theta{0.0, 0.0}, lat, grid);
    Eigen::VectorXd rho(grid.size());
    double nrm = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        rho[i] = std::norm(phi.v[i]) * grid.weight();
        nrm += rho[i];
    }
    rho /= nrm;

    // one-site masses w_gamma = int u(x-gamma) rho(x) dx for the random zone
    const double r_probe = std::min(field.r_cut(), lat.L * M_SQRT2 + 30.0);
    const int R = static_cast<int>(r_probe) + 1;
    std::vector<double> wgt;
    std::vector<std::pair<int, int>> sites;
    for (int gy = -R; gy <= R; ++gy)
        for (int gx = -R; gx <= R; ++gx) {
            if (static_cast<double>(gx) * gx + static_cast<double>(gy) * gy > r_probe * r_probe)
                continue;
            double w = 0.0;
            for (int j = 0; j < grid.ny; ++j)
                for (int i = 0; i < grid.nx; ++i)
                    w += u(Vec2(grid.x(i) - gx, grid.y(j) - gy)) * rho[grid.idx(i, j)];
            if (w > 0) {
                sites.emplace_back(gx, gy);
                wgt.push_back(w);
            }
        }

    // deterministic shift: mean couplings beyond the random zone (second-order
    // expansion of u about the cell center), plus the engine's far mean field
    double m1x = 0, m1y = 0, mxx = 0, mxy = 0, myy = 0;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            double x = grid.x(i), y = grid.y(j), r = rho[grid.idx(i, j)];
            m1x += x * r;
            m1y += y * r;
            mxx += x * x * r;
            mxy += x * y * r;
            myy += y * y * r;
        }
    double shift = field.mean_tail_field();
    if (field.r_cut() > r_probe && u.smooth()) {
        const int Rc = static_cast<int>(field.r_cut());
        for (int gy = -Rc; gy <= Rc; ++gy)
            for (int gx = -Rc; gx <= Rc; ++gx) {
                double d2 = static_cast<double>(gx) * gx + static_cast<double>(gy) * gy;
                if (d2 <= r_probe * r_probe || d2 > field.r_cut() * field.r_cut()) continue;
                double r = std::sqrt(d2);
                double ex = -gx / r, ey = -gy / r;
                double up = u.dradial(r), upp = u.d2radial(r), t = up / r;
                double hxx = upp * ex * ex + t * (1 - ex * ex);
                double hyy = upp * ey * ey + t * (1 - ey * ey);
                double hxy = (upp - t) * ex * ey;
                shift += dis.mean() * (u.radial(r) + up * (ex * m1x + ey * m1y) +
                                       0.5 * (hxx * mxx + 2 * hxy * mxy + hyy * myy));
            }
    }

    const int ne = static_cast<int>(e_grid.size());
    const int threads = hardware_threads(opts.threads);
    std::vector<std::vector<int64_t>> hits_w(threads, std::vector<int64_t>(ne, 0));
    double mean_sum = shift;
    for (double w : wgt) mean_sum += dis.mean() * w;

    parallel_for(n_samples, threads, [&](int s, int w) {
        double S = shift;
        for (size_t k = 0; k < sites.size(); ++k)
            S += dis.omega(sites[k].first, sites[k].second, static_cast<uint32_t>(s)) * wgt[k];
        for (int e = 0; e < ne; ++e)
            if (S <= c * e_grid[e]) hits_w[w][e] += 1;
    });

    TrialBound tb;
    tb.energies = e_grid;
    tb.prob.resize(ne);
    tb.prob_sigma.resize(ne);
    tb.ids_bound.resize(ne);
    tb.mean_weight_sum = mean_sum;
    const double pref = lat.dual_area() / (4.0 * M_PI * M_PI);
    for (int e = 0; e < ne; ++e) {
        int64_t h = 0;
        for (int w = 0; w < threads; ++w) h += hits_w[w][e];
        double p = static_cast<double>(h) / n_samples;
        tb.prob[e] = p;
        tb.prob_sigma[e] = std::sqrt(std::max(p * (1.0 - p), 1.0 / n_samples) / n_samples);
        tb.ids_bound[e] = pref * p;
    }
    return tb;
}

TrialNorm norm_trial(int q, const MagneticLattice& lat, const SquareGrid& grid) {
    TrialNorm tn;
    ComplexField phi = trial_bloch(q, Theta{0.0, 0.0}, lat, grid);
    tn.torus_norm2 = phi.norm2();
    double qf = 1.0;
    for (int i = 2; i <= q; ++i) qf *= i;
    tn.plane_norm2 = 2.0 * M_PI / lat.b * std::pow(2.0 / lat.b, q) * qf;
    tn.c1_bound = 0.5 * tn.plane_norm2;
    tn.above_floor = tn.torus_norm2 >= tn.c1_bound;
    return tn;
}

BandSweep band_sweep(int flux_p, int flux_r, const std::function<double(const Vec2&)>& W,
                     int theta_per_side, int q_max, double pts_per_lb, double band_tol) {
    if (flux_p < 1 || flux_r < 1) throw std::invalid_argument("band_sweep: need p, r >= 1");
    if (std::gcd(flux_p, flux_r) != 1)
        throw std::invalid_argument("band_sweep: p/r must be irreducible");
    const double b = 2.0 * M_PI * flux_p / flux_r;
    const double P1 = flux_r, P2 = 1.0;

    const double lb = 1.0 / std::sqrt(b);
    int n1 = static_cast<int>(std::ceil(P1 / (lb / pts_per_lb)));
    int n2 = static_cast<int>(std::ceil(P2 / (lb / pts_per_lb)));
    SquareGrid grid;
    grid.h = std::max(P1 / n1, P2 / n2);
    grid.nx = static_cast<int>(std::round(P1 / grid.h));
    grid.ny = static_cast<int>(std::round(P2 / grid.h));
    grid.h = P1 / grid.nx;  // common spacing; periods must stay exact
    grid.ny = static_cast<int>(std::ceil(P2 / grid.h));
    grid.x0 = -0.5 * P1;
    grid.y0 = -0.5 * P2;

    Eigen::VectorXd Wg(grid.size());
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) Wg[grid.idx(i, j)] = W(Vec2(grid.x(i), grid.y(j)));

    const int nbands = (q_max + 1) * flux_p;
    Eigen::MatrixXd bands(theta_per_side * theta_per_side, nbands);
    for (int t2 = 0; t2 < theta_per_side; ++t2) {
        for (int t1 = 0; t1 < theta_per_side; ++t1) {
            Theta th{-M_PI / P1 + (t1 + 0.5) * 2.0 * M_PI / P1 / theta_per_side,
                     -M_PI / P2 + (t2 + 0.5) * 2.0 * M_PI / P2 / theta_per_side};
            ProjectionOptions popt;
            popt.compute_defect = false;
            std::vector<FiberProjection> projs;
            for (int q = 0; q <= q_max; ++q)
                projs.push_back(build_fiber_projection_rect(q, th, b, P1, P2, flux_p, grid, popt));
            Eigen::VectorXd ev = hermitian_eigenvalues(fiber_hamiltonian(projs, Wg, b));
            bands.row(t2 * theta_per_side + t1) = ev.head(nbands).transpose();
        }
    }

    BandSweep sweep;
    sweep.flux_p = flux_p;
    sweep.flux_r = flux_r;
    sweep.band_tol = band_tol;
    for (int j = 0; j < nbands; ++j) {
        Band bd;
        bd.index = j;
        bd.min = bands.col(j).minCoeff();
        bd.max = bands.col(j).maxCoeff();
        bd.constant = (bd.max - bd.min) <= band_tol;
        sweep.bands.push_back(bd);
    }
    for (int j = 0; j < nbands; ++j) {
        Band& bd = sweep.bands[j];
        int hit_lo = 0, hit_hi = 0;
        for (int k = 0; k < nbands; ++k) {
            const Band& other = sweep.bands[k];
            if (other.min <= bd.min + band_tol && other.max >= bd.min - band_tol) ++hit_lo;
            if (other.min <= bd.max + band_tol && other.max >= bd.max - band_tol) ++hit_hi;
            if (k != j && other.min <= bd.max - band_tol && other.max >= bd.min + band_tol)
                bd.overlaps = true;
        }
        bd.lower_edge_simple = (hit_lo == 1);
        bd.upper_edge_simple = (hit_hi == 1);
    }
    return sweep;
}

} // namespace landau
