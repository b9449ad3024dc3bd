#include "landau/disorder.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "landau/quad.hpp"

namespace landau {

namespace {

double ipow(double x, int k) {
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= x;
    return p;
}

} // namespace

double OneSitePotential::radial(double r) const {
    switch (family) {
        case PotentialFamily::PowerLaw: {
            double vk = varkappa;
            int ik = static_cast<int>(vk);
            if (ik == vk && ik <= 12) return amp / ipow(1.0 + r, ik);
            return amp * std::pow(1.0 + r, -vk);
        }
        case PotentialFamily::Exponential:
            return amp * std::exp(-std::pow(r, beta));
        case PotentialFamily::SuperGaussian: {
            double t = r / eps;
            return amp * std::exp(-t * t * t * t);
        }
        case PotentialFamily::Indicator:
            return r < eps ? amp : 0.0;
    }
    return 0.0;
}

double OneSitePotential::dradial(double r) const {
    switch (family) {
        case PotentialFamily::PowerLaw:
            return -varkappa * amp * std::pow(1.0 + r, -varkappa - 1.0);
        case PotentialFamily::Exponential:
            return -beta * std::pow(r, beta - 1.0) * radial(r);
        case PotentialFamily::SuperGaussian:
            return -4.0 * ipow(r, 3) / ipow(eps, 4) * radial(r);
        case PotentialFamily::Indicator:
            return 0.0;
    }
    return 0.0;
}

double OneSitePotential::d2radial(double r) const {
    switch (family) {
        case PotentialFamily::PowerLaw:
            return varkappa * (varkappa + 1.0) * amp * std::pow(1.0 + r, -varkappa - 2.0);
        case PotentialFamily::Exponential: {
            double g = beta * std::pow(r, beta - 1.0);
            double gp = beta * (beta - 1.0) * std::pow(r, beta - 2.0);
            return (g * g - gp) * radial(r);
        }
        case PotentialFamily::SuperGaussian: {
            double g = 4.0 * ipow(r, 3) / ipow(eps, 4);
            double gp = 12.0 * ipow(r, 2) / ipow(eps, 4);
            return (g * g - gp) * radial(r);
        }
        case PotentialFamily::Indicator:
            return 0.0;
    }
    return 0.0;
}

double OneSitePotential::operator()(const Vec2& x) const {
    if (family == PotentialFamily::PowerLaw || family == PotentialFamily::Exponential)
        return radial(x.norm());
    return radial((x - x0).norm());
}

double OneSitePotential::lattice_tail_bound(double R) const {
    // sites |gamma| > R, target shifted by at most 1: bound each unit cell by
    // the value at its nearest point, integrate a decreasing majorant
    double Rm = std::max(0.0, R - 1.5);
    switch (family) {
        case PotentialFamily::PowerLaw: {
            double vk = varkappa;
            double s = 1.0 + Rm;
            return 2.0 * M_PI * amp *
                   (std::pow(s, 2.0 - vk) / (vk - 2.0) - std::pow(s, 1.0 - vk) / (vk - 1.0) +
                    std::pow(s, 1.0 - vk));
        }
        case PotentialFamily::Exponential:
        case PotentialFamily::SuperGaussian: {
            auto f = [this](double r) { return 2.0 * M_PI * (r + 1.0) * radial(r); };
            return integrate(f, Rm, Rm + 80.0, 1e-14) + 1e-300;
        }
        case PotentialFamily::Indicator:
            return (R > x0.norm() + eps + 1.5) ? 0.0 : amp * 4.0 * (eps + 1.0) * (eps + 1.0);
    }
    return 0.0;
}

double OneSitePotential::lattice_tail_sq_bound(double R) const {
    double Rm = std::max(0.0, R - 1.5);
    auto f = [this](double r) { double u = radial(r); return 2.0 * M_PI * (r + 1.0) * u * u; };
    switch (family) {
        case PotentialFamily::PowerLaw: {
            double vk = 2.0 * varkappa;
            double s = 1.0 + Rm;
            return 2.0 * M_PI * amp * amp *
                   (std::pow(s, 2.0 - vk) / (vk - 2.0) - std::pow(s, 1.0 - vk) / (vk - 1.0) +
                    std::pow(s, 1.0 - vk));
        }
        case PotentialFamily::Exponential:
        case PotentialFamily::SuperGaussian:
            return integrate(f, Rm, Rm + 80.0, 1e-16) + 1e-300;
        case PotentialFamily::Indicator:
            return (R > x0.norm() + eps + 1.5) ? 0.0 : amp * amp * 4.0 * (eps + 1.0) * (eps + 1.0);
    }
    return 0.0;
}

void OneSitePotential::validate() const {
    if (!(amp > 0)) throw std::invalid_argument("potential: amp must be > 0");
    switch (family) {
        case PotentialFamily::PowerLaw:
            if (!(varkappa > 2.0))
                throw std::invalid_argument("potential: power-law needs varkappa > 2");
            break;
        case PotentialFamily::Exponential:
            if (!(beta > 0.0) || beta > 2.0)
                throw std::invalid_argument("potential: exponential needs beta in (0,2]");
            break;
        case PotentialFamily::SuperGaussian:
        case PotentialFamily::Indicator:
            if (!(eps > 0.0)) throw std::invalid_argument("potential: eps must be > 0");
            break;
    }
}

OneSitePotential make_potential(PotentialFamily family, double amp, double varkappa,
                                double beta, Vec2 x0, double eps) {
    OneSitePotential u;
    u.family = family;
    u.amp = amp;
    u.varkappa = varkappa;
    u.beta = beta;
    u.x0 = x0;
    u.eps = eps;
    u.validate();
    return u;
}

std::vector<Coupling> sample_couplings(const DisorderModel& model, int gx_min, int gx_max,
                                       int gy_min, int gy_max, uint32_t sample) {
    std::vector<Coupling> out;
    out.reserve(static_cast<size_t>(gx_max - gx_min + 1) * (gy_max - gy_min + 1));
    for (int gy = gy_min; gy <= gy_max; ++gy)
        for (int gx = gx_min; gx <= gx_max; ++gx)
            out.push_back({gx, gy, model.omega(gx, gy, sample)});
    return out;
}

namespace {

// Taylor truncation bound for the mid-zone expansion: (D/6) sup|D^3 u|
// integrated over the annulus, D = max |x|^3 over the cell.
double taylor_tail_bound(const OneSitePotential& u, double halfdiag, double r_lo, double r_hi) {
    if (r_hi <= r_lo) return 0.0;
    double sum3 = 0.0;
    for (double r = r_lo; r < r_hi; r += 1.0) {
        double s = std::max(0.2, r - halfdiag);
        double d3;
        if (u.family == PotentialFamily::PowerLaw) {
            double vk = u.varkappa;
            d3 = vk * (vk + 1.0) * (vk + 2.0) * u.amp * std::pow(1.0 + s, -vk - 3.0);
        } else {
            double g = u.beta * std::pow(s, u.beta - 1.0);
            d3 = (g * g * g + 3.0 * g / s) * u.radial(s);
        }
        sum3 += 2.0 * M_PI * (r + 1.0) * 3.0 * d3;
    }
    return std::pow(halfdiag, 3) / 6.0 * sum3;
}

} // namespace

AlloyField::AlloyField(const MagneticLattice& lat, const OneSitePotential& u,
                       const DisorderModel& dis)
    : lat_(lat), u_(u), dis_(dis) {
    u_.validate();
    const double halfdiag = lat_.L * M_SQRT2;

    // Direct zone: exact per-point summation. Compactly supported or very
    // fast decaying u needs no mid zone at all.
    if (u_.family == PotentialFamily::Indicator) {
        r_direct_ = halfdiag + u_.x0.norm() + u_.eps + 1.0;
        r_cut_ = r_direct_;
    } else if (u_.family == PotentialFamily::SuperGaussian) {
        r_direct_ = halfdiag + u_.x0.norm() + 6.5 * u_.eps + 1.0;
        r_cut_ = r_direct_;
    } else {
        double reach = 1.0;
        while (u_.radial(reach) > 1e-14 * u_.amp && reach < 30.0) reach += 1.0;
        r_direct_ = halfdiag + reach + 1.0;

        // Mid zone out to r_cut: couplings exact, spatial dependence Taylor
        // expanded to second order. Grow r_direct until the Taylor remainder
        // is negligible, r_cut until the dropped fluctuation std is.
        double sig = std::sqrt(std::max(0.0, dis_.variance()));
        double target = 1e-8 * u_.amp;
        double rc = r_direct_;
        while (sig * std::sqrt(u_.lattice_tail_sq_bound(rc)) > target && rc < 5000.0)
            rc *= 1.25;
        r_cut_ = std::max(rc, r_direct_);
        for (int it = 0; it < 60; ++it) {
            taylor_bound_ = taylor_tail_bound(u_, halfdiag, r_direct_, r_cut_);
            if (taylor_bound_ <= 1e-5 * u_.amp || r_direct_ >= r_cut_) break;
            r_direct_ = std::min(r_direct_ * 1.2, r_cut_);
        }
    }
    residual_std_ = std::sqrt(std::max(0.0, dis_.variance())) *
                    std::sqrt(u_.lattice_tail_sq_bound(r_cut_));

    // deterministic mean tail beyond r_cut (x dependence is O(u(r_cut) L), below
    // the residual floor for the families handled here)
    if (u_.family != PotentialFamily::Indicator && u_.family != PotentialFamily::SuperGaussian) {
        double s = 0.0;
        int R2 = static_cast<int>(r_cut_ + 60.0);
        double rc2 = r_cut_ * r_cut_;
        for (int gy = -R2; gy <= R2; ++gy)
            for (int gx = -R2; gx <= R2; ++gx) {
                double d2 = static_cast<double>(gx) * gx + static_cast<double>(gy) * gy;
                if (d2 <= rc2) continue;
                s += u_.radial(std::sqrt(d2));
            }
        s += u_.lattice_tail_bound(R2);
        tail_mean_ = dis_.mean() * s;
    }

    // sup W over one unit cell by grid maximization, plus the lattice tail
    double w_r = std::min(r_cut_, u_.family == PotentialFamily::Indicator
                                      ? u_.x0.norm() + u_.eps + 2.0
                                      : 24.0);
    double sup = 0.0;
    const int ng = (u_.family == PotentialFamily::Indicator) ? 160 : 56;
    const int R = static_cast<int>(w_r) + 2;
    for (int iy = 0; iy <= ng; ++iy) {
        for (int ix = 0; ix <= ng; ++ix) {
            Vec2 x(ix / static_cast<double>(ng) - 0.5, iy / static_cast<double>(ng) - 0.5);
            if (ix == ng && iy == ng) x = u_.x0;  // include the bump center
            double w = 0.0;
            for (int gy = -R; gy <= R; ++gy)
                for (int gx = -R; gx <= R; ++gx) w += u_(x - Vec2(gx, gy));
            sup = std::max(sup, w);
        }
    }
    sup_W_ = sup + u_.lattice_tail_bound(w_r);
    sup_bound_ = dis_.omega_plus() * sup_W_;
}

AlloyField::Quadratic AlloyField::midzone_moments(uint32_t sample) const {
    Quadratic m{0, 0, 0, 0, 0, 0};
    if (r_cut_ <= r_direct_) return m;
    const int R = static_cast<int>(r_cut_);
    const double rd2 = r_direct_ * r_direct_, rc2 = r_cut_ * r_cut_;
    for (int gy = -R; gy <= R; ++gy) {
        for (int gx = -R; gx <= R; ++gx) {
            double d2 = static_cast<double>(gx) * gx + static_cast<double>(gy) * gy;
            if (d2 <= rd2 || d2 > rc2) continue;
            double r = std::sqrt(d2);
            double w = dis_.omega(gx, gy, sample);
            double u0 = u_.radial(r);
            double up = u_.dradial(r);
            double upp = u_.d2radial(r);
            // u(x - gamma) expanded at x = 0: gradient -up * gamma/r
            double ex = -gx / r, ey = -gy / r;  // unit vector from gamma to 0
            m.s0 += w * u0;
            m.s1x += w * up * ex;
            m.s1y += w * up * ey;
            // Hessian = upp e e^T + (up/r)(I - e e^T)
            double t = up / r;
            m.sxx += w * (upp * ex * ex + t * (1.0 - ex * ex));
            m.sxy += w * (upp - t) * ex * ey;
            m.syy += w * (upp * ey * ey + t * (1.0 - ey * ey));
        }
    }
    return m;
}

Eigen::VectorXd AlloyField::grid_values(const SquareGrid& grid, uint32_t sample) const {
    Eigen::VectorXd V = Eigen::VectorXd::Constant(grid.size(), tail_mean_);
    Quadratic m = midzone_moments(sample);
    const int R = static_cast<int>(r_direct_) + 1;
    const double rd2 = r_direct_ * r_direct_;
    for (int gy = -R; gy <= R; ++gy) {
        for (int gx = -R; gx <= R; ++gx) {
            double d2 = static_cast<double>(gx) * gx + static_cast<double>(gy) * gy;
            if (d2 > rd2) continue;
            double w = dis_.omega(gx, gy, sample);
            if (w == 0.0) continue;
            // inner loop over grid points
            for (int j = 0; j < grid.ny; ++j) {
                double dy = grid.y(j) - gy;
                for (int i = 0; i < grid.nx; ++i) {
                    double dx = grid.x(i) - gx;
                    V[grid.idx(i, j)] += w * u_(Vec2(dx, dy));
                }
            }
        }
    }
    if (r_cut_ > r_direct_) {
        for (int j = 0; j < grid.ny; ++j) {
            double y = grid.y(j);
            for (int i = 0; i < grid.nx; ++i) {
                double x = grid.x(i);
                V[grid.idx(i, j)] += m.s0 + m.s1x * x + m.s1y * y +
                                     0.5 * (m.sxx * x * x + 2.0 * m.sxy * x * y + m.syy * y * y);
            }
        }
    }
    return V;
}

double AlloyField::eval(const Vec2& x, uint32_t sample) const {
    double v = tail_mean_;
    const int R = static_cast<int>(r_direct_) + 1;
    const double rd2 = r_direct_ * r_direct_;
    for (int gy = -R; gy <= R; ++gy)
        for (int gx = -R; gx <= R; ++gx) {
            double d2 = static_cast<double>(gx) * gx + static_cast<double>(gy) * gy;
            if (d2 > rd2) continue;
            v += dis_.omega(gx, gy, sample) * u_(x - Vec2(gx, gy));
        }
    if (r_cut_ > r_direct_) {
        Quadratic m = midzone_moments(sample);
        v += m.s0 + m.s1x * x[0] + m.s1y * x[1] +
             0.5 * (m.sxx * x[0] * x[0] + 2.0 * m.sxy * x[0] * x[1] + m.syy * x[1] * x[1]);
    }
    return v;
}

Vec2 PeriodizedField::wrap(const Vec2& x) const {
    const double P = field->lattice().cell_side();
    auto w = [P](double t) {
        t = std::fmod(t + 0.5 * P, P);
        if (t < 0) t += P;
        return t - 0.5 * P;
    };
    return Vec2(w(x[0]), w(x[1]));
}

double PeriodizedField::eval(const Vec2& x) const { return field->eval(wrap(x), sample); }

void require_h4(const AlloyField& field) {
    double M = field.sup_bound();
    double gap = 2.0 * field.lattice().b;
    if (!(M < gap)) {
        std::ostringstream os;
        os << "H4 violated: sup |V| = " << M << " >= 2b = " << gap;
        throw std::invalid_argument(os.str());
    }
}

} // namespace landau
