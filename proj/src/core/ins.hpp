#ifndef AFFECT_CORE_INS_HPP
#define AFFECT_CORE_INS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "core/emd.hpp"

namespace affect {

struct InsConfig {
    int scale_count = 10;
    double scale_min = 0.0015; // window length as a fraction of the series
    double scale_max = 0.5;
    int surrogates = 50;
    std::uint64_t seed = 0;
};

// 10 log-spaced T_h/T ratios by default.
std::vector<double> ins_scale_grid(const InsConfig& cfg);

// Phase-randomized surrogate: same periodogram, i.i.d. uniform phases, DC and
// Nyquist bins kept real.
std::vector<double> make_surrogate(std::span<const double> x, std::uint64_t seed);

// KL divergence of each Hann-windowed short-time spectrum against the
// time-averaged spectrum, both unit-normalized after an epsilon floor.
std::vector<double> spectral_kl_series(std::span<const double> x,
                                       std::size_t window_len,
                                       std::size_t n_windows);

struct InsPoint {
    double scale = 0.0;
    double ins = 0.0;
    double gamma = 0.0;
    bool nonstationary = false;
    bool feasible = false;  // window >= 8 samples
    bool testable = false;  // surrogate KL variances not all zero
    double theta1 = 0.0;
    double theta0_mean = 0.0;
};

struct InsProfile {
    std::vector<InsPoint> points;
    int surrogates = 0;
};

// INS across a set of scales with one shared set of surrogate realizations.
InsProfile ins_profile(std::span<const double> x, std::span<const double> scales,
                       int surrogates, std::uint64_t seed);

InsPoint compute_ins(std::span<const double> x, double scale, int surrogates,
                     std::uint64_t seed);

// Per-IMF per-scale INS values; infeasible or untestable entries are 0.
std::vector<InsProfile> ins_for_imfs(const ImfSet& imfs, const InsConfig& cfg);

std::size_t ins_window_count(std::size_t len, std::size_t window_len);

} // namespace affect

#endif
