#ifndef AFFECT_CORE_WAVELET_HPP
#define AFFECT_CORE_WAVELET_HPP

#include <span>
#include <vector>

namespace affect {

struct ScaleVariance {
    int scale = 0;      // decomposition level j
    int n_coeffs = 0;   // N_j, detail coefficients at this level
    double variance = 0.0; // (1/N_j) sum d(j,n)^2
};

// Pyramid DWT (Daubechies 12-tap filters, periodic boundary) detail variances
// for levels j_min..j_max. Levels are dropped once fewer than 2 detail
// coefficients remain, so the returned range may stop short of j_max.
std::vector<ScaleVariance> wavelet_log_variances(std::span<const double> x,
                                                 int j_min, int j_max);

// One periodized analysis step; exposed for tests.
void dwt_step(std::span<const double> a, std::vector<double>& approx,
              std::vector<double>& detail);

} // namespace affect

#endif
