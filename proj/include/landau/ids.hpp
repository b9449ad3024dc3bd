#ifndef LANDAU_IDS_HPP
#define LANDAU_IDS_HPP

#include <string>
#include <vector>

#include "landau/projection.hpp"

namespace landau {

// E-grid with the estimated counting measure per unit area, Monte Carlo
// standard errors, and the provenance needed to reproduce it.
struct IDSCurve {
    Eigen::VectorXd energies;  // relative to the reference level 2bq
    Eigen::VectorXd values;
    Eigen::VectorXd stderrs;
    int q = 0;
    int samples = 0;
    int theta_nodes = 0;
    uint64_t seed = 0;
    double b = 0.0;
    double sup_v = 0.0;        // M
    bool starved = false;      // fewer than 100 nonzero counts at the smallest E
    std::vector<std::string> warnings;
};

struct EngineOptions {
    int theta_per_side = 2;
    int samples = 1000;
    int threads = 1;
    double pts_per_lb = 4.0;
    uint64_t theta_seed = 0x7463u;  // for randomized theta draws
};

// Reduced IDS rho_q(E) = (2pi)^{-2} int N(E; r_q(theta)) dtheta, averaged
// over disorder. Saturates at b/(2pi) for E > M. Requires H4 and an E-grid
// inside (0, 2b - M).
IDSCurve reduced_ids(int q, const AlloyField& field, const Eigen::VectorXd& e_grid,
                     const EngineOptions& opts);

// Periodic IDS via the compressed fiber Hamiltonian over levels 0..Q_max;
// energies here are absolute. Counting trusted only below 2 b Q_max - M.
IDSCurve periodic_ids(const AlloyField& field, const Eigen::VectorXd& e_grid, int q_max,
                      const EngineOptions& opts);

// Bracket of the true IDS increment N_b(2bq+E) - N_b(2bq) by
// (E rho_q(d1 E), E rho_q(d2 E)); the exponentially small corrections are
// ignored at this scale.
struct IncrementBracket {
    IDSCurve lower, upper;
    double d1 = 0.5, d2 = 2.0;
};
IncrementBracket ids_increment(int q, const AlloyField& field, const Eigen::VectorXd& e_grid,
                               double d1, double d2, const EngineOptions& opts);

// Spectral sandwich check: q = 0 uses N(E;r0) <= N(E;h) <= N(c0 E;r0);
// q >= 1 uses N(c1 E;r_q) <= N(2bq+E;h) - N(2bq;h) <= N(c2 E;r_q).
struct SandwichRow {
    int sample = 0;
    int q = 0;
    double t1 = 0, t2 = 0;
    double E = 0;
    int n_lower = 0, n_mid = 0, n_upper = 0;
    bool ok_lower = false, ok_upper = false;
};
struct SandwichReport {
    std::vector<SandwichRow> rows;
    int violations = 0;
    double violation_fraction = 0.0;
    double c0 = 0, c1 = 0, c2 = 0;
    int q_max = 0;
};
SandwichReport sandwich_check(int q, const AlloyField& field, int n_samples,
                              const std::vector<double>& e_values, int q_max,
                              double c0, double c1, double c2, const EngineOptions& opts);

// Same check across several q and several level cutoffs with the projection
// builds shared; reports indexed [q index][q_max index].
std::vector<std::vector<SandwichReport>> sandwich_check_suite(
    const AlloyField& field, int n_samples, const std::vector<double>& e_values,
    const std::vector<int>& qs, const std::vector<int>& q_maxes, double c0, double c1,
    double c2, const EngineOptions& opts);

// Monte Carlo estimate of P(sum_gamma omega_gamma w_gamma <= c E) with
// w_gamma the one-site mass of the normalized trial Bloch section at
// theta = 0, and the implied lower bound (2pi)^{-2} area(Lambda*) P.
struct TrialBound {
    Eigen::VectorXd energies;
    Eigen::VectorXd prob;        // estimated probability per E
    Eigen::VectorXd prob_sigma;  // binomial std error
    Eigen::VectorXd ids_bound;   // (2pi)^{-2} area(Lambda*) * prob
    double mean_weight_sum = 0;  // E[sum omega w] for reporting
};
TrialBound trial_lower_bound(int q, const AlloyField& field, const Eigen::VectorXd& e_grid,
                             int n_samples, double c, const EngineOptions& opts);

// Norm of the trial section at theta = 0 over the cell, against the plane
// integral of zbar^q e^{-b|z|^2/4}.
struct TrialNorm {
    double torus_norm2 = 0;   // int_Lambda |phi|^2 by quadrature
    double plane_norm2 = 0;   // (2pi/b)(2/b)^q q!
    double c1_bound = 0;      // half the plane value (the proved floor shape)
    bool above_floor = false;
};
TrialNorm norm_trial(int q, const MagneticLattice& lat, const SquareGrid& grid);

// Floquet band sweep for H_0 + W at rational flux b/(2pi) = p/r over the
// lattice r Z + Z, compressed to levels 0..q_max.
struct Band {
    int index = 0;
    double min = 0, max = 0;
    bool constant = false;
    bool lower_edge_simple = false, upper_edge_simple = false;
    bool overlaps = false;
};
struct BandSweep {
    std::vector<Band> bands;
    int flux_p = 1, flux_r = 1;
    double band_tol = 0.0;
};
BandSweep band_sweep(int flux_p, int flux_r, const std::function<double(const Vec2&)>& W,
                     int theta_per_side, int q_max, double pts_per_lb = 4.0,
                     double band_tol = 1e-9);

} // namespace landau

#endif
