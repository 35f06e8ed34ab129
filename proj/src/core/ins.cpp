#include "core/ins.hpp"

#include <boost/math/distributions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "core/error.hpp"
#include "core/fft.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"

namespace affect {

namespace {

constexpr double kSpectrumFloor = 1e-12;
constexpr std::size_t kMinWindow = 8;

void require_finite(std::span<const double> x) {
    for (double v : x)
        if (!std::isfinite(v))
            throw Error(Status::invalid_argument, "non-finite input series");
}

} // namespace

std::vector<double> ins_scale_grid(const InsConfig& cfg) {
    if (cfg.scale_count < 1 || cfg.scale_min <= 0.0 || cfg.scale_max < cfg.scale_min ||
        cfg.scale_max > 1.0)
        throw Error(Status::invalid_argument, "bad INS scale grid");
    std::vector<double> scales(static_cast<std::size_t>(cfg.scale_count));
    if (cfg.scale_count == 1) {
        scales[0] = cfg.scale_min;
        return scales;
    }
    const double log_lo = std::log(cfg.scale_min);
    const double log_hi = std::log(cfg.scale_max);
    for (int i = 0; i < cfg.scale_count; ++i)
        scales[static_cast<std::size_t>(i)] =
            std::exp(log_lo + (log_hi - log_lo) * i / (cfg.scale_count - 1));
    return scales;
}

std::vector<double> make_surrogate(std::span<const double> x, std::uint64_t seed) {
    if (x.size() < 4)
        throw Error(Status::too_short, "surrogate needs at least 4 samples");
    require_finite(x);

    const std::size_t n = x.size();
    auto spectrum = fft_real(x);
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    for (std::size_t k = 1; 2 * k < n; ++k) {
        const double mag = std::abs(spectrum[k]);
        const double p = phase(rng);
        spectrum[k] = std::polar(mag, p);
        spectrum[n - k] = std::conj(spectrum[k]);
    }
    // DC and (for even n) Nyquist bins stay real as the original had them.
    const auto inv = fft(spectrum, true);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = inv[i].real() / static_cast<double>(n);
    return out;
}

std::size_t ins_window_count(std::size_t len, std::size_t window_len) {
    if (window_len == 0 || window_len > len) return 0;
    // tiles the signal with >= 50% overlap when possible
    return std::max<std::size_t>(2, 2 * len / window_len - 1);
}

std::vector<double> spectral_kl_series(std::span<const double> x,
                                       std::size_t window_len,
                                       std::size_t n_windows) {
    if (window_len < 2 || window_len > x.size())
        throw Error(Status::invalid_argument, "window longer than signal");
    if (n_windows < 2)
        throw Error(Status::invalid_argument, "need at least 2 windows");
    require_finite(x);

    std::vector<double> hann(window_len);
    for (std::size_t i = 0; i < window_len; ++i)
        hann[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i /
                                        static_cast<double>(window_len - 1)));

    const std::size_t n_bins = window_len / 2 + 1;
    std::vector<std::vector<double>> spectra(n_windows);
    std::vector<double> global(n_bins, 0.0);
    std::vector<double> frame(window_len);
    const double span = static_cast<double>(x.size() - window_len);
    for (std::size_t w = 0; w < n_windows; ++w) {
        const auto start = static_cast<std::size_t>(
            std::llround(span * static_cast<double>(w) /
                         static_cast<double>(n_windows - 1)));
        for (std::size_t i = 0; i < window_len; ++i) frame[i] = x[start + i] * hann[i];
        auto power = power_spectrum(frame);
        for (auto& p : power) p += kSpectrumFloor;
        for (std::size_t b = 0; b < n_bins; ++b) global[b] += power[b];
        spectra[w] = std::move(power);
    }
    for (auto& g : global) g /= static_cast<double>(n_windows);

    // Generalized KL between unnormalized spectra: the level terms make the
    // divergence see window energy as well as spectral shape. Every bin
    // contributes >= 0.
    std::vector<double> kl(n_windows, 0.0);
    for (std::size_t w = 0; w < n_windows; ++w) {
        double d = 0.0;
        for (std::size_t b = 0; b < n_bins; ++b) {
            const double p = spectra[w][b];
            const double q = global[b];
            d += p * std::log(p / q) - p + q;
        }
        kl[w] = std::max(0.0, d);
    }
    return kl;
}

namespace {

InsPoint ins_point_at_scale(std::span<const double> x,
                            const std::vector<std::vector<double>>& surrogates,
                            double scale) {
    InsPoint point;
    point.scale = scale;

    const std::size_t n = x.size();
    const auto window = static_cast<std::size_t>(
        std::llround(scale * static_cast<double>(n)));
    if (window < kMinWindow || window > n) return point; // infeasible
    point.feasible = true;

    const std::size_t n_windows = ins_window_count(n, window);
    point.theta1 = variance(spectral_kl_series(x, window, n_windows));

    std::vector<double> theta0(surrogates.size());
    for (std::size_t j = 0; j < surrogates.size(); ++j)
        theta0[j] = variance(spectral_kl_series(surrogates[j], window, n_windows));
    const double m0 = mean(theta0);
    if (!(m0 > 0.0)) return point; // untestable: degenerate surrogate statistics
    point.testable = true;
    point.theta0_mean = m0;
    point.ins = std::sqrt(point.theta1 / m0);

    // Gamma threshold at 95% confidence, method-of-moments fit to the
    // mean-normalized surrogate variances.
    std::vector<double> normalized(theta0.size());
    for (std::size_t j = 0; j < theta0.size(); ++j) normalized[j] = theta0[j] / m0;
    const double v = sample_variance(normalized);
    if (v > 1e-15) {
        boost::math::gamma_distribution<double> gamma_dist(1.0 / v, v);
        point.gamma = std::sqrt(boost::math::quantile(gamma_dist, 0.95));
    } else {
        point.gamma = 1.0; // point-mass null
    }
    point.nonstationary = point.ins > point.gamma;
    return point;
}

} // namespace

InsProfile ins_profile(std::span<const double> x, std::span<const double> scales,
                       int surrogates, std::uint64_t seed) {
    if (surrogates < 8)
        throw Error(Status::invalid_argument, "need at least 8 surrogates");
    require_finite(x);

    InsProfile profile;
    profile.surrogates = surrogates;
    profile.points.reserve(scales.size());

    bool any_feasible = false;
    for (double s : scales) {
        const auto window = static_cast<std::size_t>(
            std::llround(s * static_cast<double>(x.size())));
        if (window >= kMinWindow && window <= x.size()) any_feasible = true;
    }
    std::vector<std::vector<double>> surrogate_series;
    if (any_feasible && x.size() >= 4) {
        surrogate_series.resize(static_cast<std::size_t>(surrogates));
        for (int j = 0; j < surrogates; ++j)
            surrogate_series[static_cast<std::size_t>(j)] =
                make_surrogate(x, derive_seed(seed, static_cast<std::uint64_t>(j) + 1));
    }

    for (double s : scales) {
        if (surrogate_series.empty()) {
            InsPoint p;
            p.scale = s;
            profile.points.push_back(p);
        } else {
            profile.points.push_back(ins_point_at_scale(x, surrogate_series, s));
        }
    }
    return profile;
}

InsPoint compute_ins(std::span<const double> x, double scale, int surrogates,
                     std::uint64_t seed) {
    const double scales[1] = {scale};
    auto profile = ins_profile(x, scales, surrogates, seed);
    auto& point = profile.points[0];
    if (!point.feasible)
        throw Error(Status::invalid_argument,
                    "INS window below 8 samples at scale " + std::to_string(scale));
    if (!point.testable)
        throw Error(Status::untestable, "degenerate surrogate statistics (constant signal?)");
    return point;
}

std::vector<InsProfile> ins_for_imfs(const ImfSet& imfs, const InsConfig& cfg) {
    const auto scales = ins_scale_grid(cfg);
    std::vector<InsProfile> out;
    out.reserve(imfs.modes.size());
    for (std::size_t m = 0; m < imfs.modes.size(); ++m) {
        const auto& mode = imfs.modes[m];
        const bool all_zero = std::all_of(mode.begin(), mode.end(),
                                          [](double v) { return v == 0.0; });
        if (all_zero) {
            // zero-padded IMF: untestable by construction, recorded as zeros
            InsProfile profile;
            profile.surrogates = cfg.surrogates;
            for (double s : scales) {
                InsPoint p;
                p.scale = s;
                profile.points.push_back(p);
            }
            out.push_back(std::move(profile));
        } else {
            out.push_back(ins_profile(mode, scales, cfg.surrogates,
                                      derive_seed(cfg.seed, m + 1)));
        }
    }
    return out;
}

} // namespace affect
