#ifndef AFFECT_CORE_HURST_HPP
#define AFFECT_CORE_HURST_HPP

#include <span>
#include <vector>

#include "core/features.hpp"
#include "core/signal.hpp"
#include "core/wavelet.hpp"

namespace affect {

struct HurstEstimate {
    double h = 0.5;
    double theta = 0.0;
    int scale_min = 0;
    int scale_max = 0;
    bool valid = false;
    bool clamped = false;
    std::vector<ScaleVariance> log_variances;
};

// Weighted least squares of log2(variance) on the level index, weights
// proportional to the coefficient counts; H = (1 + slope) / 2, clamped to
// [0.01, 0.99]. Fewer than two positive-variance scales yields valid=false.
HurstEstimate estimate_hurst(const std::vector<ScaleVariance>& variances);

HurstEstimate hurst_of_series(std::span<const double> x, int j_min, int j_max);

// pH baseline: one Hurst value per 50 ms frame, hopped by 10 ms, wavelet
// scales 2..12 (truncated to what the frame supports). Frames without a valid
// estimate take 0.5 and are flagged in source_id.
FeatureMatrix extract_ph(const Signal& signal);

} // namespace affect

#endif
