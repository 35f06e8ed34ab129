#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "core/emd.hpp"
#include "core/error.hpp"
#include "core/fft.hpp"
#include "core/stats.hpp"

using namespace affect;

namespace {

std::vector<double> tone(double freq, std::size_t n, double fs, double amp = 1.0) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = amp * std::sin(2.0 * std::numbers::pi * freq * i / fs);
    return x;
}

double reconstruction_error(std::span<const double> x, const ImfSet& set) {
    double err = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double sum = set.residual[i];
        for (const auto& mode : set.modes) sum += mode[i];
        err = std::max(err, std::abs(x[i] - sum));
    }
    return err / std::max(1e-300, max_abs(x));
}

double band_energy(std::span<const double> x, double f_lo, double f_hi, double fs) {
    const auto spec = fft_real(x);
    double e = 0.0;
    for (std::size_t k = 0; k <= x.size() / 2; ++k) {
        const double f = fs * k / static_cast<double>(x.size());
        if (f >= f_lo && f <= f_hi) e += std::norm(spec[k]);
    }
    return e;
}

} // namespace

TEST_CASE("sifting a pure sinusoid leaves a near-zero trend") {
    const auto x = tone(100.0, 4000, 8000.0);
    const auto step = sift_once(x);
    REQUIRE(step.has_value());
    const std::size_t guard = 400;
    for (std::size_t i = guard; i + guard < x.size(); ++i) {
        CHECK(std::abs(step->trend[i]) <= 0.05);
        CHECK(step->detail[i] == doctest::Approx(x[i]).epsilon(0.08));
    }
}

TEST_CASE("a constant offset lands in the trend") {
    auto x = tone(100.0, 4000, 8000.0);
    for (auto& v : x) v += 5.0;
    const auto step = sift_once(x);
    REQUIRE(step.has_value());
    for (std::size_t i = 400; i + 400 < x.size(); ++i)
        CHECK(step->trend[i] == doctest::Approx(5.0).epsilon(0.01));
}

TEST_CASE("monotonic input has too few extrema to sift") {
    std::vector<double> line(64);
    for (std::size_t i = 0; i < line.size(); ++i) line[i] = 0.5 * i;
    CHECK_FALSE(sift_once(line).has_value());

    std::vector<double> tiny{1.0, 2.0, 1.0};
    CHECK_FALSE(sift_once(tiny).has_value());
}

TEST_CASE("extrema finder handles plateaus and interior-only extrema") {
    const std::vector<double> x{0, 1, 1, 0, -1, -1, -1, 0, 2, 0};
    const Extrema e = find_extrema(x);
    REQUIRE(e.max_idx.size() == 2);
    CHECK(e.max_idx[0] == 1); // midpoint of the {1,1} plateau rounds down
    CHECK(e.max_idx[1] == 8);
    REQUIRE(e.min_idx.size() == 1);
    CHECK(e.min_idx[0] == 5);
    CHECK(e.min_val[0] == -1.0);
}

TEST_CASE("two-tone decomposition separates the components") {
    const std::size_t n = 8000;
    const auto hi = tone(300.0, n, 8000.0);
    const auto lo = tone(40.0, n, 8000.0);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = hi[i] + lo[i];

    const SiftConfig cfg;
    const ImfSet set = emd_decompose(x, cfg);

    const std::size_t guard = 400;
    const std::size_t body = n - 2 * guard;
    CHECK(correlation({set.modes[0].data() + guard, body}, {hi.data() + guard, body}) >=
          0.95);
    CHECK(correlation({set.modes[1].data() + guard, body}, {lo.data() + guard, body}) >=
          0.95);

    SUBCASE("mode ordering by zero-crossing count") {
        std::size_t prev = count_zero_crossings(set.modes[0]);
        for (std::size_t m = 1; m < set.modes.size(); ++m) {
            const std::size_t cur = count_zero_crossings(set.modes[m]);
            if (max_abs(set.modes[m]) == 0.0) break; // padding reached
            CHECK(prev >= cur);
            prev = cur;
        }
    }

    SUBCASE("non-padded modes satisfy the admissibility count") {
        for (const auto& mode : set.modes) {
            if (max_abs(mode) == 0.0) continue;
            CHECK(imf_admissible(mode));
        }
    }
}

TEST_CASE("reconstruction is exact for random inputs") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> len(256, 4096);
    const SiftConfig cfg;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(len(rng));
        for (auto& v : x) v = gauss(rng);
        const ImfSet set = emd_decompose(x, cfg);
        CHECK(reconstruction_error(x, set) <= 1e-8);
    }
}

TEST_CASE("a pure sinusoid yields exactly one nonzero mode") {
    const auto x = tone(100.0, 2048, 8000.0);
    const ImfSet set = emd_decompose(x, SiftConfig{});
    REQUIRE(set.modes.size() == 6);
    CHECK(max_abs(set.modes[0]) > 0.5);
    for (std::size_t m = 1; m < 6; ++m) CHECK(max_abs(set.modes[m]) == 0.0);
}

TEST_CASE("emd rejects bad inputs") {
    CHECK_THROWS_AS(emd_decompose(std::vector<double>(8, 1.0), SiftConfig{}), Error);
    std::vector<double> bad(64, 0.0);
    bad[10] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(emd_decompose(bad, SiftConfig{}), Error);
    CHECK_THROWS_AS(eemd_decompose(bad, SiftConfig{}), Error);
}

TEST_CASE("degenerate ensemble equals plain emd") {
    const auto x = tone(250.0, 1024, 8000.0);
    SiftConfig cfg;
    cfg.ensemble_trials = 1;
    cfg.noise_std = 0.0;
    const ImfSet a = emd_decompose(x, cfg);
    const ImfSet b = eemd_decompose(x, cfg);
    CHECK(a.modes == b.modes);
    CHECK(a.residual == b.residual);
}

TEST_CASE("eemd is deterministic in the seed and worker count") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(640);
    for (auto& v : x) v = gauss(rng);

    SiftConfig cfg;
    cfg.ensemble_trials = 12;
    cfg.noise_std = 0.02;
    cfg.rng_seed = 99;
    const ImfSet a = eemd_decompose(x, cfg, 1);
    const ImfSet b = eemd_decompose(x, cfg, 1);
    const ImfSet c = eemd_decompose(x, cfg, 4);
    CHECK(a.modes == b.modes);
    CHECK(a.modes == c.modes);
    CHECK(a.residual == c.residual);

    SUBCASE("completeness holds exactly by construction") {
        CHECK(reconstruction_error(x, a) <= 1e-12);
    }

    SUBCASE("a different seed gives a different decomposition") {
        SiftConfig other = cfg;
        other.rng_seed = 100;
        CHECK(eemd_decompose(x, other).modes != a.modes);
    }
}

TEST_CASE("ensemble averaging reduces mode mixing on an intermittent burst") {
    const std::size_t n = 4000;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = i / 8000.0;
        x[i] = std::sin(2.0 * std::numbers::pi * 40.0 * t);
        if (std::fmod(t * 40.0, 1.0) < 0.15)
            x[i] += 0.4 * std::sin(2.0 * std::numbers::pi * 900.0 * t);
    }
    const double low_ref = band_energy(x, 30.0, 50.0, 8000.0);

    const ImfSet plain = emd_decompose(x, SiftConfig{});
    SiftConfig ens;
    ens.ensemble_trials = 100;
    ens.noise_std = 0.02;
    ens.rng_seed = 3;
    const ImfSet ensemble = eemd_decompose(x, ens);

    const double leak_plain = band_energy(plain.modes[0], 30.0, 50.0, 8000.0) / low_ref;
    const double leak_ens =
        band_energy(ensemble.modes[0], 30.0, 50.0, 8000.0) / low_ref;
    CHECK(leak_ens < leak_plain);
}
