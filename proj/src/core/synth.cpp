#include "core/synth.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>

#include "core/error.hpp"
#include "core/fgn.hpp"
#include "core/rng.hpp"
#include "core/signal.hpp"
#include "core/stats.hpp"

namespace affect {

LabelSpec label_spec_from_hurst(const std::string& name, double hurst) {
    LabelSpec spec;
    spec.name = name;
    spec.hurst = hurst;
    const double arousal = 1.0 - hurst;
    spec.am_freq_hz = 1.0 + 9.0 * arousal;
    spec.am_depth = 0.15 + 0.75 * arousal;
    spec.tone_hz = 120.0 + 500.0 * arousal;
    spec.tone_gain = 0.15;
    return spec;
}

CorpusManifest synth_corpus(const std::vector<LabelSpec>& specs, int n_speakers,
                            double seconds_per_label, std::uint64_t seed,
                            const std::string& out_dir) {
    if (specs.size() < 2)
        throw Error(Status::invalid_argument, "need at least 2 labels");
    if (n_speakers < 1 || seconds_per_label <= 0.0)
        throw Error(Status::invalid_argument, "bad speaker count or duration");
    std::filesystem::create_directories(out_dir);

    constexpr int kRate = 8000;
    const auto n = static_cast<std::size_t>(std::lround(seconds_per_label * kRate));

    CorpusManifest manifest;
    for (std::size_t li = 0; li < specs.size(); ++li) {
        const auto& spec = specs[li];
        for (int spk = 0; spk < n_speakers; ++spk) {
            const std::uint64_t file_seed =
                derive_seed(seed, li * 10000 + static_cast<std::size_t>(spk) + 1);
            auto rng = make_rng(derive_seed(file_seed, 2));
            std::uniform_real_distribution<double> unit(0.0, 1.0);

            auto x = generate_fgn(n, spec.hurst, derive_seed(file_seed, 1));
            const double carrier_std = stddev(x);
            const double am_phase = 2.0 * std::numbers::pi * unit(rng);
            const double tone_phase = 2.0 * std::numbers::pi * unit(rng);
            const double gain = 0.6 + 0.4 * unit(rng);
            const double tilt = -0.3 + 0.6 * unit(rng);

            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / kRate;
                const double am =
                    1.0 - spec.am_depth *
                              (0.5 + 0.5 * std::sin(2.0 * std::numbers::pi *
                                                        spec.am_freq_hz * t +
                                                    am_phase));
                const double tone =
                    spec.tone_gain *
                    std::sin(2.0 * std::numbers::pi * spec.tone_hz * t + tone_phase);
                x[i] = (x[i] / carrier_std) * am + tone;
            }
            // per-speaker spectral tilt
            double prev = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double cur = x[i];
                x[i] = cur + tilt * prev;
                prev = cur;
            }
            const double peak = max_abs(x);
            const double scale = peak > 0.0 ? 0.5 * gain / peak : 0.0;
            for (auto& v : x) v *= scale;

            Signal signal;
            signal.sample_rate_hz = kRate;
            signal.samples = std::move(x);
            const std::string filename =
                spec.name + "_spk" + std::to_string(spk + 1) + ".wav";
            save_wav(signal, (std::filesystem::path(out_dir) / filename).string());
            manifest.entries.push_back(
                {filename, spec.name, "spk" + std::to_string(spk + 1)});
        }
    }
    save_manifest(manifest, (std::filesystem::path(out_dir) / "manifest.csv").string());
    return manifest;
}

} // namespace affect
