#include "core/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "core/error.hpp"
#include "core/stats.hpp"

namespace affect {

namespace {

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

double decode_sample(const unsigned char* p, std::uint16_t format, int bits) {
    switch (bits) {
        case 8: // unsigned
            return (static_cast<int>(p[0]) - 128) / 128.0;
        case 16: {
            const auto v = static_cast<std::int16_t>(read_u16(p));
            return v / 32768.0;
        }
        case 24: {
            std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
            if (v & 0x800000) v |= ~0xFFFFFF; // sign extend
            return v / 8388608.0;
        }
        case 32: {
            if (format == kFormatFloat) {
                float f;
                std::uint32_t raw = read_u32(p);
                std::memcpy(&f, &raw, sizeof(f));
                return static_cast<double>(f);
            }
            break;
        }
        default:
            break;
    }
    throw Error(Status::bad_format,
                "unsupported WAV sample layout: format tag " + std::to_string(format) +
                    ", " + std::to_string(bits) + " bits");
}

} // namespace

Signal load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Status::io_error, "cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw Error(Status::bad_format, path + ": not a RIFF/WAVE file");

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    bool have_fmt = false;
    const unsigned char* data = nullptr;
    std::size_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t size = read_u32(bytes.data() + pos + 4);
        const std::size_t body = pos + 8;
        if (body + size > bytes.size())
            throw Error(Status::bad_format, path + ": truncated chunk");
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (size < 16) throw Error(Status::bad_format, path + ": short fmt chunk");
            format = read_u16(bytes.data() + body);
            channels = read_u16(bytes.data() + body + 2);
            rate = read_u32(bytes.data() + body + 4);
            bits = read_u16(bytes.data() + body + 14);
            if (format == kFormatExtensible) {
                // actual format lives in the first two bytes of the subformat GUID
                if (size < 40) throw Error(Status::bad_format, path + ": short extensible fmt");
                format = read_u16(bytes.data() + body + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = bytes.data() + body;
            data_size = size;
        }
        pos = body + size + (size & 1); // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr)
        throw Error(Status::bad_format, path + ": missing fmt or data chunk");
    if (format != kFormatPcm && format != kFormatFloat)
        throw Error(Status::bad_format,
                    path + ": unsupported WAV encoding (format tag " +
                        std::to_string(format) + ")");
    if (channels == 0 || rate == 0 || bits == 0 || bits % 8 != 0)
        throw Error(Status::bad_format, path + ": malformed fmt chunk");

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * channels;
    const std::size_t frames = data_size / frame_bytes;
    if (frames == 0) throw Error(Status::bad_format, path + ": empty data chunk");

    Signal signal;
    signal.sample_rate_hz = static_cast<int>(rate);
    signal.samples.resize(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        double acc = 0.0;
        for (std::size_t c = 0; c < channels; ++c)
            acc += decode_sample(data + f * frame_bytes + c * bytes_per_sample, format,
                                 bits);
        signal.samples[f] = acc / channels;
    }
    validate_signal(signal);
    return signal;
}

void save_wav(const Signal& signal, const std::string& path) {
    validate_signal(signal);
    const std::size_t n = signal.samples.size();
    const std::uint32_t data_size = static_cast<std::uint32_t>(n * 2);

    std::vector<unsigned char> out;
    out.reserve(44 + data_size);
    auto put_u16 = [&](std::uint16_t v) {
        out.push_back(v & 0xFF);
        out.push_back((v >> 8) & 0xFF);
    };
    auto put_u32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xFF);
    };
    auto put_tag = [&](const char* tag) {
        out.insert(out.end(), tag, tag + 4);
    };

    put_tag("RIFF");
    put_u32(36 + data_size);
    put_tag("WAVE");
    put_tag("fmt ");
    put_u32(16);
    put_u16(1); // PCM
    put_u16(1); // mono
    put_u32(static_cast<std::uint32_t>(signal.sample_rate_hz));
    put_u32(static_cast<std::uint32_t>(signal.sample_rate_hz) * 2);
    put_u16(2);
    put_u16(16);
    put_tag("data");
    put_u32(data_size);
    for (double x : signal.samples) {
        const double clamped = std::clamp(x, -1.0, 1.0);
        const auto v = static_cast<std::int16_t>(std::lrint(clamped * 32767.0));
        put_u16(static_cast<std::uint16_t>(v));
    }

    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(Status::io_error, "cannot write " + path);
    file.write(reinterpret_cast<const char*>(out.data()),
               static_cast<std::streamsize>(out.size()));
    if (!file) throw Error(Status::io_error, "write failed for " + path);
}

namespace {

constexpr int kTargetRate = 8000;
constexpr double kCutoffHz = 0.45 * kTargetRate;
constexpr int kHalfTaps = 32;
constexpr double kKaiserBeta = 8.0;

double bessel_i0(double x) {
    // power series; converges quickly for the argument range used here
    double sum = 1.0, term = 1.0;
    const double half_x = x / 2.0;
    for (int k = 1; k < 64; ++k) {
        term *= (half_x / k) * (half_x / k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

double kaiser(double z) { // z in [-1, 1]
    const double t = 1.0 - z * z;
    if (t <= 0.0) return 0.0;
    return bessel_i0(kKaiserBeta * std::sqrt(t)) / bessel_i0(kKaiserBeta);
}

double sinc(double z) {
    if (std::abs(z) < 1e-12) return 1.0;
    const double pz = M_PI * z;
    return std::sin(pz) / pz;
}

} // namespace

Signal resample_to_8k(const Signal& signal) {
    validate_signal(signal);
    const int rate = signal.sample_rate_hz;
    if (rate < kTargetRate)
        throw Error(Status::invalid_argument,
                    "input rate " + std::to_string(rate) +
                        " Hz is below 8000 Hz; upsampling refused");
    if (rate == kTargetRate) return signal;

    const long g = std::gcd(static_cast<long>(rate), static_cast<long>(kTargetRate));
    const long up = kTargetRate / g;   // L
    const long down = rate / g;        // M

    // Per-phase windowed-sinc taps at the input rate, unit DC gain per phase.
    const double cutoff = kCutoffHz / rate; // cycles per input sample
    const int taps = 2 * kHalfTaps;
    std::vector<std::vector<double>> phases(static_cast<std::size_t>(up));
    for (long r = 0; r < up; ++r) {
        auto& h = phases[static_cast<std::size_t>(r)];
        h.resize(taps);
        const double frac = static_cast<double>(r) / up;
        double sum = 0.0;
        for (int j = 0; j < taps; ++j) {
            const double u = (j - (kHalfTaps - 1)) - frac;
            h[j] = 2.0 * cutoff * sinc(2.0 * cutoff * u) * kaiser(u / kHalfTaps);
            sum += h[j];
        }
        for (auto& v : h) v /= sum;
    }

    const long n_in = static_cast<long>(signal.samples.size());
    const long n_out = (n_in - 1) * up / down + 1;
    Signal out;
    out.sample_rate_hz = kTargetRate;
    out.samples.resize(static_cast<std::size_t>(n_out));
    for (long m = 0; m < n_out; ++m) {
        const long num = m * down;
        const long i0 = num / up;
        const long r = num % up;
        const auto& h = phases[static_cast<std::size_t>(r)];
        double acc = 0.0;
        for (int j = 0; j < taps; ++j) {
            const long k = i0 + j - (kHalfTaps - 1);
            if (k >= 0 && k < n_in) acc += signal.samples[static_cast<std::size_t>(k)] * h[j];
        }
        out.samples[static_cast<std::size_t>(m)] = acc;
    }
    return out;
}

Signal select_voiced(const Signal& signal, const VoicedParams& params) {
    validate_signal(signal);
    const auto frame_len = static_cast<std::size_t>(
        std::lround(params.frame_ms / 1000.0 * signal.sample_rate_hz));
    if (frame_len < 2 || signal.samples.size() < frame_len)
        throw Error(Status::too_short, "signal shorter than one voicing frame");

    const std::size_t n_frames = signal.samples.size() / frame_len;
    std::vector<double> energies(n_frames), zcrs(n_frames);
    for (std::size_t f = 0; f < n_frames; ++f) {
        const double* x = signal.samples.data() + f * frame_len;
        double e = 0.0;
        std::size_t crossings = 0;
        for (std::size_t i = 0; i < frame_len; ++i) {
            e += x[i] * x[i];
            if (i + 1 < frame_len && x[i] * x[i + 1] < 0.0) ++crossings;
        }
        energies[f] = e / static_cast<double>(frame_len);
        zcrs[f] = static_cast<double>(crossings) / static_cast<double>(frame_len - 1);
    }

    const double e_thr = quantile(energies, params.energy_quantile);
    const double z_thr = quantile(zcrs, params.zcr_quantile);

    Signal out;
    out.sample_rate_hz = signal.sample_rate_hz;
    for (std::size_t f = 0; f < n_frames; ++f) {
        if (energies[f] > 0.0 && energies[f] >= e_thr && zcrs[f] <= z_thr) {
            const auto begin = signal.samples.begin() +
                               static_cast<std::ptrdiff_t>(f * frame_len);
            out.samples.insert(out.samples.end(), begin,
                               begin + static_cast<std::ptrdiff_t>(frame_len));
        }
    }
    if (out.samples.empty())
        throw Error(Status::no_voiced_frames,
                    "no voiced frames at energy quantile " +
                        std::to_string(params.energy_quantile) + ", zcr quantile " +
                        std::to_string(params.zcr_quantile));
    return out;
}

void validate_signal(const Signal& signal) {
    if (signal.sample_rate_hz <= 0)
        throw Error(Status::invalid_argument, "sample rate must be positive");
    if (signal.samples.empty())
        throw Error(Status::invalid_argument, "empty signal");
    for (double v : signal.samples)
        if (!std::isfinite(v))
            throw Error(Status::invalid_argument, "signal contains non-finite samples");
}

} // namespace affect
