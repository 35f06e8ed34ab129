#include "core/hurst.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace affect {

HurstEstimate estimate_hurst(const std::vector<ScaleVariance>& variances) {
    HurstEstimate est;
    est.log_variances = variances;

    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    int used = 0;
    int lo = 0, hi = 0;
    for (const auto& sv : variances) {
        if (sv.variance <= 0.0 || sv.n_coeffs < 2) continue;
        const double w = static_cast<double>(sv.n_coeffs);
        const double xj = static_cast<double>(sv.scale);
        const double yj = std::log2(sv.variance);
        sw += w;
        swx += w * xj;
        swy += w * yj;
        swxx += w * xj * xj;
        swxy += w * xj * yj;
        if (used == 0) lo = hi = sv.scale;
        lo = std::min(lo, sv.scale);
        hi = std::max(hi, sv.scale);
        ++used;
    }
    if (used < 2) return est; // valid stays false

    const double denom = sw * swxx - swx * swx;
    if (denom <= 0.0) return est;
    est.theta = (sw * swxy - swx * swy) / denom;
    est.h = (1.0 + est.theta) / 2.0;
    if (est.h < 0.01) {
        est.h = 0.01;
        est.clamped = true;
    } else if (est.h > 0.99) {
        est.h = 0.99;
        est.clamped = true;
    }
    est.scale_min = lo;
    est.scale_max = hi;
    est.valid = true;
    return est;
}

HurstEstimate hurst_of_series(std::span<const double> x, int j_min, int j_max) {
    try {
        return estimate_hurst(wavelet_log_variances(x, j_min, j_max));
    } catch (const Error&) {
        return HurstEstimate{}; // too short: invalid estimate, not a failure
    }
}

FeatureMatrix extract_ph(const Signal& signal) {
    validate_signal(signal);
    if (signal.sample_rate_hz != 8000)
        throw Error(Status::invalid_argument, "pH extraction expects 8 kHz input");
    const std::size_t frame = 400; // 50 ms
    const std::size_t hop = 80;    // 10 ms
    if (signal.samples.size() < frame)
        throw Error(Status::too_short, "signal shorter than one 50 ms frame");

    FeatureMatrix m;
    m.schema = {"pH"};
    m.source_id = "ph";
    const std::size_t n_frames = (signal.samples.size() - frame) / hop + 1;
    std::size_t flagged = 0;
    for (std::size_t f = 0; f < n_frames; ++f) {
        std::span<const double> window(signal.samples.data() + f * hop, frame);
        const auto est = hurst_of_series(window, 2, 12);
        if (est.valid) {
            m.rows.push_back({est.h});
        } else {
            m.rows.push_back({0.5});
            ++flagged;
        }
    }
    if (flagged > 0)
        m.source_id += ";invalid_frames=" + std::to_string(flagged);
    return m;
}

} // namespace affect
