#ifndef AFFECT_CORE_EMD_HPP
#define AFFECT_CORE_EMD_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace affect {

struct SiftConfig {
    int max_imfs = 6;
    int max_sift_iters = 50;
    double sd_threshold = 0.2;
    int ensemble_trials = 100;
    double noise_std = 0.01; // relative to the segment's standard deviation
    std::uint64_t rng_seed = 0;
};

// Modes ordered fastest first; modes + residual sum back to the input.
// Missing natural modes are padded with zeros so the mode count is fixed.
struct ImfSet {
    std::vector<std::vector<double>> modes;
    std::vector<double> residual;
    std::size_t input_len = 0;
};

struct Extrema {
    std::vector<std::size_t> max_idx;
    std::vector<double> max_val;
    std::vector<std::size_t> min_idx;
    std::vector<double> min_val;
};

// Interior extrema only; plateaus report their midpoint.
Extrema find_extrema(std::span<const double> x);

std::size_t count_zero_crossings(std::span<const double> x);

struct SiftStep {
    std::vector<double> detail;
    std::vector<double> trend;
};

// One envelope-mean subtraction. Empty when the series has too few interior
// extrema to build both envelopes (decomposition terminates, not an error).
std::optional<SiftStep> sift_once(std::span<const double> x);

ImfSet emd_decompose(std::span<const double> x, const SiftConfig& cfg);

// Noise-assisted ensemble average of per-trial EMD modes. With one trial and
// zero noise this reduces exactly to emd_decompose. The residual is the
// completeness complement x - sum(modes).
ImfSet eemd_decompose(std::span<const double> x, const SiftConfig& cfg, int jobs = 1);

bool imf_admissible(std::span<const double> x);

} // namespace affect

#endif
