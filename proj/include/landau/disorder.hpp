#ifndef LANDAU_DISORDER_HPP
#define LANDAU_DISORDER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "landau/lattice.hpp"
#include "landau/rng.hpp"

namespace landau {

enum class PotentialFamily { PowerLaw, Exponential, SuperGaussian, Indicator };

// One-site potential u >= 0 with the decay class selecting the Lifshitz
// regime. PowerLaw: amp (1+|x|)^-varkappa; Exponential: amp e^{-|x|^beta};
// SuperGaussian: amp e^{-(|x-x0|/eps)^4}; Indicator: amp 1_{|x-x0|<eps}.
struct OneSitePotential {
    PotentialFamily family = PotentialFamily::PowerLaw;
    double amp = 1.0;
    double varkappa = 4.0;
    double beta = 2.0;
    Vec2 x0 = Vec2::Zero();
    double eps = 0.5;

    double operator()(const Vec2& x) const;
    double radial(double r) const;        // u at distance r from the center
    double dradial(double r) const;       // du/dr
    double d2radial(double r) const;      // d2u/dr2
    bool smooth() const { return family != PotentialFamily::Indicator; }

    //

    // Upper bound on sum_{|gamma| > R} u(gamma - y), |y| <= 1.
    double lattice_tail_bound(double R) const;
    // Upper bound on sum_{|gamma| > R} u(gamma - y)^2, |y| <= 1.
    double lattice_tail_sq_bound(double R) const;

    void validate() const;  // H1-style checks on the parameters
};

OneSitePotential make_potential(PotentialFamily family, double amp, double varkappa,
                                double beta, Vec2 x0, double eps);

// i.i.d. couplings omega_gamma = U^{1/kappa}, U uniform on [0,1], so that
// P(omega <= E) = E^kappa exactly on [0,1]. Counter-based: the value at a
// site depends only on (seed, gamma, sample).
struct DisorderModel {
    double kappa = 1.0;
    uint64_t seed = 0;

    double omega(int gx, int gy, uint32_t sample) const {
        double u = Philox(seed).site_uniform(gx, gy, sample);
        return kappa == 1.0 ? u : std::pow(u, 1.0 / kappa);
    }
    double omega_plus() const { return 1.0; }
    double mean() const { return kappa / (kappa + 1.0); }
    double variance() const {
        double m = mean();
        return kappa / (kappa + 2.0) - m * m;
    }
};

struct Coupling {
    int gx, gy;
    double omega;
};
std::vector<Coupling> sample_couplings(const DisorderModel& model, int gx_min, int gx_max,
                                       int gy_min, int gy_max, uint32_t sample);

// Alloy-type field V_omega(x) = sum_gamma omega_gamma u(x - gamma) and its
// 2L-periodization. Sites within r_direct of the cell are summed exactly per
// evaluation point; sites out to r_cut enter through a second-order Taylor
// expansion about the cell center; beyond r_cut the couplings are replaced by
// their mean, leaving a centered residual whose std bound is reported.
class AlloyField {
public:
    AlloyField(const MagneticLattice& lat, const OneSitePotential& u,
               const DisorderModel& dis);

    // V on the cell grid (= V^per there), for one disorder sample.
    Eigen::VectorXd grid_values(const SquareGrid& grid, uint32_t sample) const;

    // Single-point evaluation with the same far-field treatment.
    double eval(const Vec2& x, uint32_t sample) const;

    // ess sup sup_x V (omega_plus * sup W plus tail bound).
    double sup_bound() const { return sup_bound_; }
    double sup_W() const { return sup_W_; }
    double residual_std_bound() const { return residual_std_; }
    double mean_tail_field() const { return tail_mean_; }
    double r_direct() const { return r_direct_; }
    double r_cut() const { return r_cut_; }

    const MagneticLattice& lattice() const { return lat_; }
    const OneSitePotential& potential() const { return u_; }
    const DisorderModel& disorder() const { return dis_; }

private:
    struct Quadratic {
        double s0, s1x, s1y, sxx, sxy, syy;
    };
    Quadratic midzone_moments(uint32_t sample) const;

    MagneticLattice lat_;
    OneSitePotential u_;
    DisorderModel dis_;
    double r_direct_ = 0.0;
    double r_cut_ = 0.0;
    double tail_mean_ = 0.0;     // omega_mean * sum_{|gamma|>r_cut} u(-gamma), x-independent part
    double residual_std_ = 0.0;  // std bound of the dropped centered fluctuation
    double taylor_bound_ = 0.0;  // bound on the mid-zone Taylor truncation error
    double sup_W_ = 0.0;
    double sup_bound_ = 0.0;
};

// V^per: wraps evaluation into the cell; V^per = V on Lambda_{2L}.
struct PeriodizedField {
    const AlloyField* field = nullptr;
    uint32_t sample = 0;

    double eval(const Vec2& x) const;
    Vec2 wrap(const Vec2& x) const;
};

// Refuses configurations violating H4 (M >= 2b).
void require_h4(const AlloyField& field);

} // namespace landau

#endif
