#ifndef LANDAU_FIT_HPP
#define LANDAU_FIT_HPP

#include <string>

#include "landau/ids.hpp"

namespace landau {

// Lifshitz-exponent regression on an IDS increment curve: the double
// logarithm ln|ln v(E)| against the regressor of the decay class
// (ln E for power-law, ln|ln E| for exponential / super-Gaussian).
enum class FitFamily { PowerLaw, Exponential, SuperGaussian };

struct LifshitzFit {
    FitFamily family = FitFamily::PowerLaw;
    double slope = 0.0;          // fitted regression slope
    double intercept = 0.0;
    double r2 = 0.0;
    double target = 0.0;         // 2/(vk-2), 1+2/beta, or the window midpoint
    double target_lo = 0.0, target_hi = 0.0;  // super-Gaussian window
    double deviation = 0.0;      // |slope magnitude - target|
    int points_used = 0;
    double e_lo = 0.0, e_hi = 0.0;
    std::string note;            // sign convention + desk-scale caveat
};

// Uses only points with value > 3 stderr and value < saturation; requires at
// least min_points of them. Throws std::runtime_error otherwise.
LifshitzFit fit_lifshitz(const IDSCurve& curve, FitFamily family, double varkappa,
                         double beta, double sg_delta = 0.2, int min_points = 6);

} // namespace landau

#endif
