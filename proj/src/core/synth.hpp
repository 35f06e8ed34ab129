#ifndef AFFECT_CORE_SYNTH_HPP
#define AFFECT_CORE_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/manifest.hpp"

namespace affect {

// Generative recipe for one synthetic label: an fGn carrier with the given
// Hurst value, amplitude-modulated and mixed with a tone.
struct LabelSpec {
    std::string name;
    double hurst = 0.5;
    double am_freq_hz = 4.0;
    double am_depth = 0.5;
    double tone_hz = 300.0;
    double tone_gain = 0.15;
};

// Arousal-linked defaults: lower Hurst behaves like a high-arousal voice
// (fast deep modulation, higher tone).
LabelSpec label_spec_from_hurst(const std::string& name, double hurst);

// Writes <label>_<speaker>.wav per pair plus manifest.csv (paths relative to
// out_dir). Per-speaker random gain and spectral tilt provide speaker
// variability; identical seeds give bitwise-identical files.
CorpusManifest synth_corpus(const std::vector<LabelSpec>& specs, int n_speakers,
                            double seconds_per_label, std::uint64_t seed,
                            const std::string& out_dir);

} // namespace affect

#endif
