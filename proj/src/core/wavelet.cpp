#include "core/wavelet.hpp"

#include <array>

#include "core/error.hpp"

namespace affect {

namespace {

// Daubechies 12-coefficient scaling filter (6 vanishing moments).
constexpr std::array<double, 12> kScaling = {
    0.11154074335008017,   0.4946238903983854,    0.7511339080215775,
    0.3152503517092432,    -0.22626469396516913,  -0.12976686756709563,
    0.09750160558707936,   0.02752286553001629,   -0.031582039318031156,
    0.0005538422009938016, 0.004777257511010651,  -0.001077301084995585,
};

constexpr std::size_t kTaps = kScaling.size();

std::array<double, 12> make_wavelet_filter() {
    std::array<double, 12> g{};
    for (std::size_t m = 0; m < kTaps; ++m)
        g[m] = (m % 2 == 0 ? 1.0 : -1.0) * kScaling[kTaps - 1 - m];
    return g;
}

const std::array<double, 12> kWavelet = make_wavelet_filter();

} // namespace

void dwt_step(std::span<const double> a, std::vector<double>& approx,
              std::vector<double>& detail) {
    const std::size_t n = a.size();
    const std::size_t half = n / 2;
    approx.assign(half, 0.0);
    detail.assign(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        double lo = 0.0, hi = 0.0;
        for (std::size_t m = 0; m < kTaps; ++m) {
            const double v = a[(2 * k + m) % n];
            lo += kScaling[m] * v;
            hi += kWavelet[m] * v;
        }
        approx[k] = lo;
        detail[k] = hi;
    }
}

std::vector<ScaleVariance> wavelet_log_variances(std::span<const double> x,
                                                 int j_min, int j_max) {
    if (j_min < 1 || j_max < j_min)
        throw Error(Status::invalid_argument, "bad wavelet scale range");
    if (x.size() < (std::size_t{1} << (j_min + 1)))
        throw Error(Status::too_short,
                    "series too short for wavelet scale " + std::to_string(j_min));

    std::vector<ScaleVariance> out;
    std::vector<double> a(x.begin(), x.end());
    std::vector<double> next, detail;

    // Details of a constant are analytically zero; anything at roundoff level
    // relative to the input is reported as zero so it cannot seed a fit.
    double mean_square = 0.0;
    for (double v : x) mean_square += v * v;
    mean_square /= static_cast<double>(x.size());
    const double dust = 1e-24 * mean_square;

    for (int j = 1; j <= j_max; ++j) {
        // periodization needs an even length; odd levels wrap one extra sample
        // so deep scales (e.g. 3..7 on a 160-sample frame) stay reachable
        if (a.size() % 2 != 0) a.push_back(a.front());
        if (a.size() < 4) break;
        dwt_step(a, next, detail);
        if (detail.size() < 2) break;
        if (j >= j_min) {
            double s = 0.0;
            for (double d : detail) s += d * d;
            double variance = s / static_cast<double>(detail.size());
            if (variance <= dust) variance = 0.0;
            out.push_back({j, static_cast<int>(detail.size()), variance});
        }
        a.swap(next);
    }
    return out;
}

} // namespace affect
