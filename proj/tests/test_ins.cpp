#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "core/error.hpp"
#include "core/fft.hpp"
#include "core/ins.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"

using namespace affect;

namespace {

std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
    auto rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = gauss(rng);
    return x;
}

// silence-tone-silence
std::vector<double> burst_tone(std::size_t n) {
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n / 3; i < 2 * n / 3; ++i)
        x[i] = std::sin(2.0 * std::numbers::pi * 128.0 * i / static_cast<double>(n));
    return x;
}

std::vector<double> block_energies(std::span<const double> x, std::size_t blocks) {
    std::vector<double> e(blocks, 0.0);
    const std::size_t len = x.size() / blocks;
    for (std::size_t b = 0; b < blocks; ++b)
        for (std::size_t i = 0; i < len; ++i) e[b] += x[b * len + i] * x[b * len + i];
    return e;
}

} // namespace

TEST_CASE("surrogates preserve the periodogram and total energy") {
    const auto x = white_noise(1024, 4);
    const auto s = make_surrogate(x, 99);
    REQUIRE(s.size() == x.size());

    const auto px = fft_real(x);
    const auto ps = fft_real(s);
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double ref = std::norm(px[k]);
        CHECK(std::abs(std::norm(ps[k]) - ref) <= 1e-8 * std::max(ref, 1.0));
    }

    double ex = 0.0, es = 0.0;
    for (double v : x) ex += v * v;
    for (double v : s) es += v * v;
    CHECK(es == doctest::Approx(ex).epsilon(1e-8));

    SUBCASE("deterministic per seed") {
        CHECK(make_surrogate(x, 99) == s);
        CHECK(make_surrogate(x, 100) != s);
    }
}

TEST_CASE("surrogate of an amplitude-burst tone spreads the energy in time") {
    const auto x = burst_tone(2048);
    const auto s = make_surrogate(x, 7);
    CHECK(variance(block_energies(s, 8)) < variance(block_energies(x, 8)));
}

TEST_CASE("identical windows give zero divergence") {
    const std::vector<double> constant(512, 2.5);
    for (double kl : spectral_kl_series(constant, 64, 15)) CHECK(kl <= 1e-12);
}

TEST_CASE("divergence values are nonnegative") {
    for (int t = 0; t < 10; ++t) {
        const auto x = white_noise(1024, 40 + t);
        for (double kl : spectral_kl_series(x, 100, 19)) CHECK(kl >= 0.0);
    }
    CHECK_THROWS_AS(spectral_kl_series(white_noise(64, 1), 128, 4), Error);
}

TEST_CASE("an equal-energy amplitude burst raises the mean divergence") {
    const std::size_t n = 2048;
    auto noise = white_noise(n, 8);
    auto burst = noise;
    // push the energy of the second half into the first, same total
    double e = 0.0;
    for (double v : noise) e += v * v;
    for (std::size_t i = 0; i < n; ++i) burst[i] *= (i < n / 2) ? std::sqrt(1.8) : std::sqrt(0.2);
    double eb = 0.0;
    for (double v : burst) eb += v * v;
    for (auto& v : burst) v *= std::sqrt(e / eb);

    const auto kl_noise = spectral_kl_series(noise, 102, 39);
    const auto kl_burst = spectral_kl_series(burst, 102, 39);
    CHECK(mean(kl_burst) > mean(kl_noise));
}

TEST_CASE("white noise is usually declared stationary") {
    int stationary = 0;
    const int trials = 25;
    for (int t = 0; t < trials; ++t) {
        const auto point = compute_ins(white_noise(2048, 6000 + t), 0.05, 50, 7000 + t);
        REQUIRE(point.feasible);
        REQUIRE(point.testable);
        CHECK(point.ins >= 0.0);
        if (!point.nonstationary) ++stationary;
    }
    CHECK(stationary >= 20); // nominal 95% confidence with slack
}

TEST_CASE("a broadband amplitude step is declared non-stationary") {
    int detected = 0;
    const int trials = 25;
    for (int t = 0; t < trials; ++t) {
        auto x = white_noise(2048, 8100 + t);
        for (std::size_t i = x.size() / 2; i < x.size(); ++i) x[i] *= 10.0;
        if (compute_ins(x, 0.05, 50, 9100 + t).nonstationary) ++detected;
    }
    CHECK(detected == trials);
}

TEST_CASE("a signal's own surrogate passes the stationarity test") {
    int stationary = 0;
    const int trials = 25;
    for (int t = 0; t < trials; ++t) {
        const auto base = white_noise(2048, 10000 + t);
        const auto self = make_surrogate(base, 11000 + t);
        if (!compute_ins(self, 0.05, 50, 12000 + t).nonstationary) ++stationary;
    }
    CHECK(stationary >= 20);
}

TEST_CASE("INS is invariant to global amplitude scaling") {
    const auto x = white_noise(2048, 13000);
    const auto base = compute_ins(x, 0.05, 50, 555);
    for (double c : {0.1, 10.0}) {
        std::vector<double> scaled(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = c * x[i];
        const auto point = compute_ins(scaled, 0.05, 50, 555);
        CHECK(std::abs(point.ins - base.ins) <= 1e-6);
        CHECK(std::abs(point.gamma - base.gamma) <= 1e-6);
    }
}

TEST_CASE("degenerate inputs are reported, not mvalue-faked") {
    const std::vector<double> constant(1024, 1.0);
    try {
        compute_ins(constant, 0.05, 50, 1);
        FAIL("expected untestable");
    } catch (const Error& e) {
        CHECK(e.status() == Status::untestable);
    }

    CHECK_THROWS_AS(compute_ins(white_noise(1024, 2), 0.001, 50, 1), Error); // window < 8
    CHECK_THROWS_AS(compute_ins(white_noise(1024, 2), 0.05, 4, 1), Error);   // J < 8
}

TEST_CASE("default scale grid is log-spaced over the paper range") {
    const InsConfig cfg;
    const auto scales = ins_scale_grid(cfg);
    REQUIRE(scales.size() == 10);
    CHECK(scales.front() == doctest::Approx(0.0015));
    CHECK(scales.back() == doctest::Approx(0.5));
    for (std::size_t i = 1; i < scales.size(); ++i) {
        CHECK(scales[i] > scales[i - 1]);
        // constant ratio between neighbours
        CHECK(scales[i] / scales[i - 1] ==
              doctest::Approx(scales[1] / scales[0]).epsilon(1e-9));
    }
}

TEST_CASE("per-IMF profiles flag padded and infeasible entries") {
    ImfSet imfs;
    imfs.input_len = 640;
    imfs.modes.push_back(white_noise(640, 3));             // live mode
    imfs.modes.push_back(std::vector<double>(640, 0.0));   // zero padding
    imfs.residual.assign(640, 0.0);

    InsConfig cfg;
    cfg.surrogates = 12;
    cfg.seed = 9;
    const auto profiles = ins_for_imfs(imfs, cfg);
    REQUIRE(profiles.size() == 2);
    REQUIRE(profiles[0].points.size() == 10);
    REQUIRE(profiles[1].points.size() == 10);

    std::size_t feasible = 0;
    for (const auto& p : profiles[0].points) {
        if (!p.feasible) continue;
        ++feasible;
        CHECK(p.testable);
        CHECK(p.ins >= 0.0);
    }
    CHECK(feasible >= 5); // 640 samples support T_h >= 8 from mid-grid up

    for (const auto& p : profiles[1].points) {
        CHECK_FALSE(p.testable);
        CHECK(p.ins == 0.0);
    }
}

TEST_CASE("white-noise IMFs are mostly stationary across the grid") {
    InsConfig cfg;
    cfg.surrogates = 24;
    int nonstationary = 0, testable = 0;
    for (int t = 0; t < 6; ++t) {
        ImfSet imfs;
        imfs.input_len = 2048;
        imfs.modes.push_back(white_noise(2048, 20000 + t));
        imfs.residual.assign(2048, 0.0);
        cfg.seed = 21000 + t;
        const auto profiles = ins_for_imfs(imfs, cfg);
        for (const auto& p : profiles[0].points) {
            if (!p.feasible || !p.testable) continue;
            ++testable;
            if (p.nonstationary) ++nonstationary;
        }
    }
    REQUIRE(testable > 0);
    CHECK(static_cast<double>(nonstationary) / testable <= 0.3);
}
