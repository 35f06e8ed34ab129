#include "core/fgn.hpp"

#include <cmath>
#include <complex>

#include "core/error.hpp"
#include "core/fft.hpp"
#include "core/rng.hpp"

namespace affect {

namespace {

double fgn_autocov(double k, double hurst) {
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(std::abs(k + 1.0), h2) - 2.0 * std::pow(std::abs(k), h2) +
                  std::pow(std::abs(k - 1.0), h2));
}

} // namespace

std::vector<double> generate_fgn(std::size_t n, double hurst, std::uint64_t seed) {
    if (n < 2 || hurst <= 0.0 || hurst >= 1.0)
        throw Error(Status::invalid_argument, "fGn needs n >= 2 and hurst in (0,1)");

    // circulant first row: gamma(0..n-1), gamma(n-2..1)
    const std::size_t m = 2 * (n - 1);
    std::vector<std::complex<double>> row(m);
    for (std::size_t k = 0; k < n; ++k)
        row[k] = fgn_autocov(static_cast<double>(k), hurst);
    for (std::size_t k = n; k < m; ++k) row[k] = row[m - k];

    auto eigen = fft(row);
    auto rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::complex<double>> spectrum(m);
    for (std::size_t k = 0; k <= m / 2; ++k) {
        const double lambda = std::max(0.0, eigen[k].real()); // clip tiny negatives
        if (k == 0 || k == m / 2) {
            spectrum[k] = std::sqrt(lambda) * gauss(rng);
        } else {
            const double scale = std::sqrt(lambda / 2.0);
            spectrum[k] = {scale * gauss(rng), scale * gauss(rng)};
            spectrum[m - k] = std::conj(spectrum[k]);
        }
    }

    const auto series = fft(spectrum);
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = series[i].real() * norm;
    return out;
}

} // namespace affect
