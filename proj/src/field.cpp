#include "landau/field.hpp"

#include <cmath>
#include <stdexcept>
#include <fftw3.h>

namespace landau {

ComplexField sample_field(const SquareGrid& g, const std::function<cplx(const Vec2&)>& f) {
    ComplexField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.at(i, j) = f(Vec2(g.x(i), g.y(j)));
    return out;
}

namespace {

// 2D FFT in place on column-major data, sign = FFTW_FORWARD/BACKWARD.
void fft2(Eigen::VectorXcd& v, int nx, int ny, int sign) {
    fftw_complex* data = reinterpret_cast<fftw_complex*>(v.data());
    // column-major (i fastest) means fftw sees dims {ny, nx}
    fftw_plan plan = fftw_plan_dft_2d(ny, nx, data, data, sign, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

double freq(int k, int n, double h) {
    int m = (k <= n / 2) ? k : k - n;
    return 2.0 * M_PI * m / (n * h);
}

} // namespace

RaiseResult creation_raise(const ComplexField& f, double b, double coarse_tol) {
    const SquareGrid& g = f.grid;
    RaiseResult out;
    out.field = ComplexField(g);

    Eigen::VectorXcd fh = f.v;
    fft2(fh, g.nx, g.ny, FFTW_FORWARD);

    double total = fh.squaredNorm();
    double high = 0.0;
    Eigen::VectorXcd dh(g.size());
    const double kx_max = M_PI / g.h, ky_max = M_PI / g.h;
    for (int j = 0; j < g.ny; ++j) {
        double ky = freq(j, g.ny, g.h);
        for (int i = 0; i < g.nx; ++i) {
            double kx = freq(i, g.nx, g.h);
            // -2i d/dz  ->  kx - i ky
            dh[g.idx(i, j)] = cplx(kx, -ky) * fh[g.idx(i, j)];
            if (std::abs(kx) > 0.5 * kx_max || std::abs(ky) > 0.5 * ky_max)
                high += std::norm(fh[g.idx(i, j)]);
        }
    }
    fft2(dh, g.nx, g.ny, FFTW_BACKWARD);
    dh /= static_cast<double>(g.size());

    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            cplx zb(g.x(i), -g.y(j));
            out.field.at(i, j) = dh[g.idx(i, j)] + cplx(0.0, 0.5 * b) * zb * f.at(i, j);
        }
    }
    out.highband_fraction = (total > 0) ? high / total : 0.0;
    out.grid_too_coarse = out.highband_fraction > coarse_tol;
    return out;
}

ComplexField magnetic_translate(const Vec2& y, const ComplexField& f, double b, bool periodic) {
    const SquareGrid& g = f.grid;
    const double tol = 1e-9 * g.h;
    double sx = y[0] / g.h, sy = y[1] / g.h;
    int ix = static_cast<int>(std::lround(sx)), iy = static_cast<int>(std::lround(sy));
    if (std::abs(sx - ix) > tol || std::abs(sy - iy) > tol)
        throw std::invalid_argument("magnetic_translate: y must be grid aligned");

    ComplexField out(g);
    const cplx phase0 = std::exp(cplx(0.0, 0.5 * b * y[0] * y[1]));
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            int si = i + ix, sj = j + iy;
            if (periodic) {
                si = ((si % g.nx) + g.nx) % g.nx;
                sj = ((sj % g.ny) + g.ny) % g.ny;
            } else if (si < 0 || si >= g.nx || sj < 0 || sj >= g.ny) {
                throw std::out_of_range("magnetic_translate: x+y outside sampled domain");
            }
            double wedge = g.x(i) * y[1] - g.y(j) * y[0];
            out.at(i, j) = phase0 * std::exp(cplx(0.0, 0.5 * b * wedge)) * f.at(si, sj);
        }
    }
    return out;
}

} // namespace landau
