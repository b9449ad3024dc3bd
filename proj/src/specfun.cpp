#include "landau/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace landau {

namespace {

// Falling factorial j (j-1) ... (j-k+1), k >= 0.
double falling(double j, int k) {
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= (j - i);
    return p;
}

double factorial(int n) {
    double p = 1.0;
    for (int i = 2; i <= n; ++i) p *= i;
    return p;
}

template <typename T>
T laguerre_sum(int q, int alpha, T xi) {
    if (q < 0) throw std::domain_error("laguerre: q must be >= 0");
    if (alpha < -q) throw std::domain_error("laguerre: alpha must be >= -q");
    const int j = q + alpha;
    const int l0 = std::max(0, q - j);
    T sum{};
    T comp{};
    T xpow = T(1);
    for (int l = 0; l < l0; ++l) xpow *= -xi;
    for (int l = l0; l <= q; ++l) {
        // j!/((j-q+l)!(q-l)!) = falling(j, q-l) / (q-l)!
        double coef = falling(static_cast<double>(j), q - l) /
                      (factorial(q - l) * factorial(l));
        T term = coef * xpow;
        // Kahan step
        T y = term - comp;
        T t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        xpow *= -xi;
    }
    return sum;
}

} // namespace

double laguerre(int q, int alpha, double xi) { return laguerre_sum<double>(q, alpha, xi); }

cplx laguerre(int q, int alpha, cplx xi) { return laguerre_sum<cplx>(q, alpha, xi); }

double psi(int q, double xi) { return laguerre(q, 0, xi) * std::exp(-0.5 * xi); }

cplx basis_e(int j, int q, double b, const Vec2& x) {
    if (j < 0 || q < 0) throw std::domain_error("basis_e: indices must be >= 0");
    if (!(b > 0)) throw std::domain_error("basis_e: b must be > 0");
    const cplx z(x[0], x[1]);
    const cplx zb(x[0], -x[1]);
    const double r2 = x.squaredNorm();
    // log-space prefactor keeps sqrt(q!/j!) finite for large j
    const double logpref = 0.5 * (std::lgamma(q + 1.0) - std::lgamma(j + 1.0)) -
                           0.5 * std::log(M_PI) +
                           0.5 * (j - q + 1) * std::log(0.5 * b);
    const int l0 = std::max(0, q - j);
    // sum_l coef_l (b/2)^l z^{j-q+l} zbar^l, absorbing z^{j-q} into the terms
    cplx sum{};
    cplx zp = std::pow(z, j - q + l0) * std::pow(zb, l0);
    double bl = std::pow(0.5 * b, l0);
    for (int l = l0; l <= q; ++l) {
        double coef = falling(static_cast<double>(j), q - l) /
                      (factorial(q - l) * factorial(l));
        double sgn = (l % 2 == 0) ? 1.0 : -1.0;
        sum += sgn * coef * bl * zp;
        zp *= z * zb;
        bl *= 0.5 * b;
    }
    const cplx iq = std::pow(cplx(0.0, -1.0), q);
    return iq * std::exp(logpref - 0.25 * b * r2) * sum;
}

bool check_laguerre_upper(int q, int j, double xi) {
    if (j < 1 || xi < 0) throw std::domain_error("check_laguerre_upper: need j >= 1, xi >= 0");
    double lhs = laguerre(q, j - q, static_cast<double>(j) * xi);
    double rhs = std::pow(static_cast<double>(j), q) * std::exp(xi);
    return lhs * lhs <= rhs * rhs;
}

bool check_laguerre_lower(int q, int j, double xi) {
    double lhs = laguerre(q, j - q, static_cast<double>(j) * xi);
    double fq = factorial(q);
    double rhs = std::pow(0.5, 2 + 2 * q) * std::pow(static_cast<double>(j - q), 2 * q) / (fq * fq);
    return lhs * lhs >= rhs;
}

int find_j0_lower(int q, const std::vector<double>& xi_grid, int j_max) {
    int j0 = -1;
    for (int j = j_max; j > q; --j) {
        bool ok = true;
        for (double xi : xi_grid) {
            if (!check_laguerre_lower(q, j, xi)) { ok = false; break; }
        }
        if (!ok) break;
        j0 = j;
    }
    return j0;
}

} // namespace landau
