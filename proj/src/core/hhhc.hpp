#ifndef AFFECT_CORE_HHHC_HPP
#define AFFECT_CORE_HHHC_HPP

#include "core/emd.hpp"
#include "core/features.hpp"
#include "core/ins.hpp"
#include "core/signal.hpp"

namespace affect {

struct HhhcConfig {
    std::size_t segment_len = 640; // 80 ms at 8 kHz
    std::size_t segment_hop = 320; // 50% overlap
    std::size_t hurst_frame = 160; // 20 ms, non-overlapping
    int scale_min = 3;
    int scale_max = 12; // truncated to what a frame supports
    bool use_eemd = true;
    int jobs = 1;
};

// 6-dim Hurst vector per 80 ms segment: decompose (EEMD by default), estimate
// H on 20 ms frames inside each IMF, average the valid frames. IMFs without a
// valid frame contribute 0.5 and flag the segment in source_id.
FeatureMatrix extract_hhhc(const Signal& signal, const SiftConfig& sift,
                           const HhhcConfig& cfg = {});

enum class InsAppend { median, full };

// HHHC plus per-IMF INS columns: the median over the scale grid (dim 12) or
// the full grid (dim 6 + 6 * scale_count).
FeatureMatrix extract_hhhc_ins(const Signal& signal, const SiftConfig& sift,
                               const InsConfig& ins, InsAppend append,
                               const HhhcConfig& cfg = {});

} // namespace affect

#endif
