#include "core/emd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/spline.hpp"
#include "core/stats.hpp"

namespace affect {

Extrema find_extrema(std::span<const double> x) {
    Extrema e;
    const std::size_t n = x.size();
    int prev_dir = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = x[i + 1] - x[i];
        const int dir = (d > 0.0) - (d < 0.0);
        if (dir == 0) continue;
        if (prev_dir > 0 && dir < 0) {
            std::size_t j = i;
            while (j > 0 && x[j - 1] == x[i]) --j; // plateau start
            const std::size_t idx = (j + i) / 2;
            e.max_idx.push_back(idx);
            e.max_val.push_back(x[idx]);
        } else if (prev_dir < 0 && dir > 0) {
            std::size_t j = i;
            while (j > 0 && x[j - 1] == x[i]) --j;
            const std::size_t idx = (j + i) / 2;
            e.min_idx.push_back(idx);
            e.min_val.push_back(x[idx]);
        }
        prev_dir = dir;
    }
    return e;
}

std::size_t count_zero_crossings(std::span<const double> x) {
    std::size_t count = 0;
    int prev = 0;
    for (double v : x) {
        const int s = (v > 0.0) - (v < 0.0);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

bool imf_admissible(std::span<const double> x) {
    const Extrema e = find_extrema(x);
    const auto n_ext = e.max_idx.size() + e.min_idx.size();
    const auto n_zc = count_zero_crossings(x);
    const auto diff = n_ext > n_zc ? n_ext - n_zc : n_zc - n_ext;
    return diff <= 1;
}

namespace {

// Spline envelope through extrema, with the two nearest extrema mirrored
// about each end of the series before fitting.
std::vector<double> envelope(std::span<const double> idx_src,
                             std::span<const double> val_src, std::size_t n) {
    const std::size_t k = idx_src.size();
    std::vector<double> xs, ys;
    xs.reserve(k + 4);
    ys.reserve(k + 4);

    const std::size_t mirror = std::min<std::size_t>(2, k);
    const double right_edge = static_cast<double>(n - 1);
    for (std::size_t i = mirror; i-- > 0;) {
        xs.push_back(-idx_src[i]);
        ys.push_back(val_src[i]);
    }
    for (std::size_t i = 0; i < k; ++i) {
        xs.push_back(idx_src[i]);
        ys.push_back(val_src[i]);
    }
    for (std::size_t i = 0; i < mirror; ++i) {
        xs.push_back(2.0 * right_edge - idx_src[k - 1 - i]);
        ys.push_back(val_src[k - 1 - i]);
    }
    return natural_cubic_spline(xs, ys, n);
}

std::vector<double> to_double(const std::vector<std::size_t>& idx) {
    std::vector<double> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = static_cast<double>(idx[i]);
    return out;
}

} // namespace

std::optional<SiftStep> sift_once(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 4) return std::nullopt;
    const Extrema e = find_extrema(x);
    if (e.max_idx.empty() || e.min_idx.empty() ||
        e.max_idx.size() + e.min_idx.size() < 2)
        return std::nullopt;

    const auto upper = envelope(to_double(e.max_idx), e.max_val, n);
    const auto lower = envelope(to_double(e.min_idx), e.min_val, n);

    SiftStep step;
    step.trend.resize(n);
    step.detail.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        step.trend[i] = 0.5 * (upper[i] + lower[i]);
        step.detail[i] = x[i] - step.trend[i];
    }
    return step;
}

namespace {

// Sifts the residual into one IMF. Returns false only when the residual has
// too few extrema to start (decomposition is done).
bool extract_imf(const std::vector<double>& residual, const SiftConfig& cfg,
                 std::vector<double>& imf) {
    auto first = sift_once(residual);
    if (!first) return false;

    std::vector<double> prev = residual;
    imf = std::move(first->detail);
    for (int iter = 1; iter < cfg.max_sift_iters; ++iter) {
        // Cauchy-style stop: SD between consecutive details plus admissibility
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < imf.size(); ++i) {
            const double d = prev[i] - imf[i];
            num += d * d;
            den += prev[i] * prev[i];
        }
        const double sd = den > 0.0 ? num / den : 0.0;
        if (sd < cfg.sd_threshold && imf_admissible(imf)) return true;

        auto next = sift_once(imf);
        if (!next) return true; // detail lost its oscillation; accept as-is
        prev = imf;
        imf = std::move(next->detail);
    }
    return true;
}

} // namespace

ImfSet emd_decompose(std::span<const double> x, const SiftConfig& cfg) {
    if (cfg.max_imfs < 1)
        throw Error(Status::invalid_argument, "max_imfs must be >= 1");
    if (!(cfg.sd_threshold > 0.0))
        throw Error(Status::invalid_argument, "sd_threshold must be > 0");
    if (x.size() < 16)
        throw Error(Status::too_short, "EMD input shorter than 16 samples");
    for (double v : x)
        if (!std::isfinite(v))
            throw Error(Status::invalid_argument, "EMD input contains non-finite values");

    ImfSet set;
    set.input_len = x.size();
    std::vector<double> residual(x.begin(), x.end());

    while (set.modes.size() < static_cast<std::size_t>(cfg.max_imfs)) {
        std::vector<double> imf;
        if (!extract_imf(residual, cfg, imf)) break;
        for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= imf[i];
        set.modes.push_back(std::move(imf));
    }
    while (set.modes.size() < static_cast<std::size_t>(cfg.max_imfs))
        set.modes.emplace_back(x.size(), 0.0);
    set.residual = std::move(residual);
    return set;
}

ImfSet eemd_decompose(std::span<const double> x, const SiftConfig& cfg, int jobs) {
    if (cfg.ensemble_trials < 1)
        throw Error(Status::invalid_argument, "ensemble_trials must be >= 1");
    if (cfg.noise_std < 0.0)
        throw Error(Status::invalid_argument, "noise_std must be >= 0");
    if (cfg.ensemble_trials == 1 && cfg.noise_std == 0.0)
        return emd_decompose(x, cfg);
    for (double v : x)
        if (!std::isfinite(v))
            throw Error(Status::invalid_argument, "EEMD input contains non-finite values");

    const std::size_t n = x.size();
    const std::size_t trials = static_cast<std::size_t>(cfg.ensemble_trials);
    const double sigma = cfg.noise_std * stddev(x);

    ImfSet set;
    set.input_len = n;
    set.modes.assign(static_cast<std::size_t>(cfg.max_imfs),
                     std::vector<double>(n, 0.0));

    // Trials run in chunks; per-trial results are summed in trial order so the
    // output does not depend on the worker count.
    const std::size_t chunk = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                           std::max(jobs, 1)));
    std::vector<ImfSet> slot(chunk);
    for (std::size_t base = 0; base < trials; base += chunk) {
        const std::size_t count = std::min(chunk, trials - base);
        parallel_for(count, jobs, [&](std::size_t k) {
            const std::uint64_t seed = derive_seed(cfg.rng_seed, base + k + 1);
            auto rng = make_rng(seed);
            std::normal_distribution<double> noise(0.0, 1.0);
            std::vector<double> trial_input(n);
            for (std::size_t i = 0; i < n; ++i)
                trial_input[i] = x[i] + sigma * noise(rng);
            slot[k] = emd_decompose(trial_input, cfg);
        });
        for (std::size_t k = 0; k < count; ++k)
            for (std::size_t m = 0; m < set.modes.size(); ++m)
                for (std::size_t i = 0; i < n; ++i)
                    set.modes[m][i] += slot[k].modes[m][i];
    }

    const double inv = 1.0 / static_cast<double>(trials);
    for (auto& mode : set.modes)
        for (auto& v : mode) v *= inv;

    // Completeness complement rather than the averaged trial residual, so
    // modes + residual reproduce the input exactly.
    set.residual.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (const auto& mode : set.modes) acc += mode[i];
        set.residual[i] = x[i] - acc;
    }
    return set;
}

} // namespace affect
