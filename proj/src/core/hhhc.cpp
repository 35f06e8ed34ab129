#include "core/hhhc.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/hurst.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"

namespace affect {

namespace {

struct SegmentFeatures {
    std::vector<double> hurst;      // one per IMF
    std::vector<double> ins_values; // per IMF x per scale when INS is on
    std::vector<bool> ins_usable;   // feasible and testable
    bool flagged = false;
};

// Mean Hurst over the valid 20 ms frames of one IMF; 0.5 (flagged) when no
// frame yields a valid estimate, e.g. an all-zero padded mode.
double imf_hurst_mean(std::span<const double> mode, const HhhcConfig& cfg,
                      bool& any_valid) {
    const std::size_t frames = mode.size() / cfg.hurst_frame;
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t f = 0; f < frames; ++f) {
        std::span<const double> frame(mode.data() + f * cfg.hurst_frame,
                                      cfg.hurst_frame);
        const auto est = hurst_of_series(frame, cfg.scale_min, cfg.scale_max);
        if (est.valid) {
            sum += est.h;
            ++used;
        }
    }
    any_valid = used > 0;
    return used > 0 ? sum / static_cast<double>(used) : 0.5;
}

SegmentFeatures segment_features(std::span<const double> segment,
                                 const SiftConfig& sift, const HhhcConfig& cfg,
                                 const InsConfig* ins) {
    const ImfSet imfs = cfg.use_eemd ? eemd_decompose(segment, sift)
                                     : emd_decompose(segment, sift);
    SegmentFeatures out;
    out.hurst.resize(imfs.modes.size());
    for (std::size_t m = 0; m < imfs.modes.size(); ++m) {
        bool valid = false;
        out.hurst[m] = imf_hurst_mean(imfs.modes[m], cfg, valid);
        if (!valid) out.flagged = true;
    }
    if (ins != nullptr) {
        const auto profiles = ins_for_imfs(imfs, *ins);
        for (const auto& profile : profiles) {
            for (const auto& point : profile.points) {
                out.ins_values.push_back(point.testable ? point.ins : 0.0);
                out.ins_usable.push_back(point.feasible && point.testable);
            }
        }
    }
    return out;
}

FeatureMatrix extract_impl(const Signal& signal, const SiftConfig& sift,
                           const HhhcConfig& cfg, const InsConfig* ins,
                           InsAppend append) {
    validate_signal(signal);
    if (signal.sample_rate_hz != 8000)
        throw Error(Status::invalid_argument, "HHHC extraction expects 8 kHz input");
    if (signal.samples.size() < cfg.segment_len)
        throw Error(Status::too_short, "signal shorter than one 80 ms segment");

    const std::size_t n_segments =
        (signal.samples.size() - cfg.segment_len) / cfg.segment_hop + 1;
    const std::size_t n_imfs = static_cast<std::size_t>(sift.max_imfs);

    std::vector<SegmentFeatures> per_segment(n_segments);
    parallel_for(n_segments, cfg.jobs, [&](std::size_t s) {
        std::span<const double> segment(signal.samples.data() + s * cfg.segment_hop,
                                        cfg.segment_len);
        SiftConfig seg_sift = sift;
        seg_sift.rng_seed = derive_seed(sift.rng_seed, s + 1);
        InsConfig seg_ins;
        if (ins != nullptr) {
            seg_ins = *ins;
            seg_ins.seed = derive_seed(derive_seed(sift.rng_seed, s + 1), 0x1A5);
        }
        per_segment[s] =
            segment_features(segment, seg_sift, cfg, ins != nullptr ? &seg_ins : nullptr);
    });

    FeatureMatrix m;
    for (std::size_t i = 1; i <= n_imfs; ++i)
        m.schema.push_back("H_imf" + std::to_string(i));
    std::size_t scale_count = 0;
    if (ins != nullptr) {
        scale_count = static_cast<std::size_t>(ins->scale_count);
        if (append == InsAppend::median) {
            for (std::size_t i = 1; i <= n_imfs; ++i)
                m.schema.push_back("INS_imf" + std::to_string(i));
        } else {
            for (std::size_t i = 1; i <= n_imfs; ++i)
                for (std::size_t s = 1; s <= scale_count; ++s)
                    m.schema.push_back("INS_imf" + std::to_string(i) + "_s" +
                                       std::to_string(s));
        }
    }

    std::vector<std::size_t> flagged;
    for (std::size_t s = 0; s < n_segments; ++s) {
        auto& seg = per_segment[s];
        std::vector<double> row = seg.hurst;
        if (ins != nullptr) {
            if (append == InsAppend::median) {
                // median over the feasible, testable scales only
                for (std::size_t i = 0; i < n_imfs; ++i) {
                    std::vector<double> values;
                    for (std::size_t k = 0; k < scale_count; ++k) {
                        const std::size_t idx = i * scale_count + k;
                        if (seg.ins_usable[idx]) values.push_back(seg.ins_values[idx]);
                    }
                    row.push_back(values.empty() ? 0.0
                                                 : quantile(std::move(values), 0.5));
                }
            } else {
                row.insert(row.end(), seg.ins_values.begin(), seg.ins_values.end());
            }
        }
        m.rows.push_back(std::move(row));
        if (seg.flagged) flagged.push_back(s);
    }

    m.source_id = ins != nullptr ? "hhhc+ins" : "hhhc";
    if (!flagged.empty()) {
        m.source_id += ";flagged_segments=";
        for (std::size_t i = 0; i < flagged.size(); ++i) {
            if (i) m.source_id += '|';
            m.source_id += std::to_string(flagged[i]);
        }
    }
    return m;
}

} // namespace

FeatureMatrix extract_hhhc(const Signal& signal, const SiftConfig& sift,
                           const HhhcConfig& cfg) {
    return extract_impl(signal, sift, cfg, nullptr, InsAppend::median);
}

FeatureMatrix extract_hhhc_ins(const Signal& signal, const SiftConfig& sift,
                               const InsConfig& ins, InsAppend append,
                               const HhhcConfig& cfg) {
    return extract_impl(signal, sift, cfg, &ins, append);
}

} // namespace affect
