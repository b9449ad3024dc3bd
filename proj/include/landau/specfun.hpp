#ifndef LANDAU_SPECFUN_HPP
#define LANDAU_SPECFUN_HPP

#include <complex>
#include <vector>
#include <Eigen/Core>

namespace landau {

using Vec2 = Eigen::Vector2d;
using cplx = std::complex<double>;

// Generalized Laguerre polynomial L_q^{(alpha)}(xi), alpha = j - q with
// j = q + alpha >= 0, evaluated through the explicit finite sum
//   sum_{l=max(0,q-j)}^{q} j!/((j-q+l)!(q-l)!) (-xi)^l / l!
// with compensated accumulation. Throws std::domain_error for alpha < -q.
double laguerre(int q, int alpha, double xi);

// Same sum for complex argument (needed for translated-kernel identities).
cplx laguerre(int q, int alpha, cplx xi);

// Psi_q(xi) = L_q^{(0)}(xi) e^{-xi/2}.
double psi(int q, double xi);

// Angular-momentum basis function e_{j,q} of the q-th Landau level at field b:
//   (-i)^q sqrt(q!/(pi j!)) (b/2)^{(j-q+1)/2} z^{j-q} L_q^{(j-q)}(b|x|^2/2) e^{-b|x|^2/4}
// evaluated via the monomial-shifted sum, so j < q is finite at the origin.
cplx basis_e(int j, int q, double b, const Vec2& x);

// Laguerre bound checks.
// L_q^{(j-q)}(j xi)^2 <= j^{2q} e^{2 xi}  (q >= 0, j >= 1, xi >= 0).
bool check_laguerre_upper(int q, int j, double xi);
// L_q^{(j-q)}(j xi)^2 >= (1/q!^2) (1/2)^{2+2q} (j-q)^{2q}, expected for j
// beyond some finite j0(q) when xi in [0, 1/2].
bool check_laguerre_lower(int q, int j, double xi);

// Smallest j0 > q such that check_laguerre_lower holds for all j in
// [j0, j_max] across the given xi grid; returns -1 if none found.
int find_j0_lower(int q, const std::vector<double>& xi_grid, int j_max);

} // namespace landau

#endif
