#ifndef AFFECT_CORE_SIGNAL_HPP
#define AFFECT_CORE_SIGNAL_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace affect {

// Uniformly sampled mono waveform, amplitudes nominally in [-1, 1].
struct Signal {
    std::vector<double> samples;
    int sample_rate_hz = 0;

    std::size_t size() const { return samples.size(); }
    double duration_s() const {
        return sample_rate_hz > 0
                   ? static_cast<double>(samples.size()) / sample_rate_hz
                   : 0.0;
    }
};

// RIFF PCM reader: 8/16/24-bit integer and 32-bit float, mono or
// multichannel (channels averaged). Samples normalized by the format's
// full-scale value.
Signal load_wav(const std::string& path);

// 16-bit PCM mono writer.
void save_wav(const Signal& signal, const std::string& path);

// Windowed-sinc (Kaiser beta=8, half-length 32 taps per phase) polyphase
// resampler to 8 kHz, cutoff 3600 Hz. Identity when the input is already at
// 8 kHz; inputs below 8 kHz are refused.
Signal resample_to_8k(const Signal& signal);

struct VoicedParams {
    double frame_ms = 16.0;
    double energy_quantile = 0.5;
    double zcr_quantile = 0.5;
};

// Keeps non-overlapping frames with energy >= the energy quantile and zero
// crossing rate <= the ZCR quantile over the file's frames, concatenated in
// order. Zero-energy frames never qualify.
Signal select_voiced(const Signal& signal, const VoicedParams& params = {});

void validate_signal(const Signal& signal);

} // namespace affect

#endif
