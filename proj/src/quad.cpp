#include "landau/quad.hpp"

#include <cmath>
#include <stdexcept>

namespace landau {

namespace {

// 15-point Kronrod nodes on [-1,1] and weights, with the embedded 7-point
// Gauss weights (QUADPACK dqk15 constants).
const double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
const double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
const double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Gk {
    double integral;
    double err;
};

Gk gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    double err = std::abs(resk - resg) * h;
    return {resk * h, err};
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, int depth, int max_depth) {
    Gk r = gk15(f, a, b);
    // stop at the requested tolerance or at the rounding floor of the panel
    if (r.err <= tol || r.err <= 5e-14 * std::abs(r.integral) || depth >= max_depth)
        return r.integral;
    double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * tol, depth + 1, max_depth) +
           adapt(f, m, b, 0.5 * tol, depth + 1, max_depth);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
    if (!(a < b)) return 0.0;
    return adapt(f, a, b, abs_tol, 0, std::min(max_depth, 28));
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

DiscRule disc_rule(double cx, double cy, double R, int n_radial, int n_angle) {
    std::vector<double> gn, gw;
    gauss_legendre(n_radial, gn, gw);
    DiscRule rule;
    rule.x.reserve(static_cast<size_t>(n_radial) * n_angle);
    rule.y.reserve(static_cast<size_t>(n_radial) * n_angle);
    rule.w.reserve(static_cast<size_t>(n_radial) * n_angle);
    const double dth = 2.0 * M_PI / n_angle;
    for (int i = 0; i < n_radial; ++i) {
        double r = 0.5 * R * (gn[i] + 1.0);
        double wr = 0.5 * R * gw[i] * r * dth;
        for (int k = 0; k < n_angle; ++k) {
            double th = k * dth;
            rule.x.push_back(cx + r * std::cos(th));
            rule.y.push_back(cy + r * std::sin(th));
            rule.w.push_back(wr);
        }
    }
    return rule;
}

} // namespace landau
