#include "core/eval.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/hurst.hpp"
#include "core/rng.hpp"

namespace affect {

std::vector<LosoFold> build_loso_folds(const CorpusManifest& manifest) {
    validate_manifest(manifest, false);
    const auto speakers = manifest.speakers();
    if (speakers.size() < 2)
        throw Error(Status::invalid_argument,
                    "LOSO needs at least 2 speakers, manifest has " +
                        std::to_string(speakers.size()));
    std::vector<LosoFold> folds;
    folds.reserve(speakers.size());
    for (const auto& speaker : speakers) {
        LosoFold fold;
        fold.test_speaker = speaker;
        for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
            if (manifest.entries[i].speaker == speaker)
                fold.test_indices.push_back(i);
            else
                fold.train_indices.push_back(i);
        }
        folds.push_back(std::move(fold));
    }
    return folds;
}

std::string feature_mode_name(FeatureMode mode) {
    switch (mode) {
        case FeatureMode::hhhc: return "hhhc";
        case FeatureMode::hhhc_ins: return "hhhc+ins";
        case FeatureMode::ph: return "ph";
    }
    return "?";
}

FeatureMode parse_feature_mode(const std::string& name) {
    if (name == "hhhc") return FeatureMode::hhhc;
    if (name == "hhhc+ins") return FeatureMode::hhhc_ins;
    if (name == "ph") return FeatureMode::ph;
    throw Error(Status::invalid_argument, "unknown feature mode '" + name + "'");
}

long ConfusionMatrix::row_sum(std::size_t i) const {
    return std::accumulate(counts[i].begin(), counts[i].end(), 0L);
}

double ConfusionMatrix::per_class_accuracy(std::size_t i) const {
    const long total = row_sum(i);
    return total > 0 ? 100.0 * static_cast<double>(counts[i][i]) /
                           static_cast<double>(total)
                     : 0.0;
}

double ConfusionMatrix::average() const {
    double sum = 0.0;
    std::size_t classes = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (row_sum(i) == 0) continue;
        sum += per_class_accuracy(i);
        ++classes;
    }
    return classes > 0 ? sum / static_cast<double>(classes) : 0.0;
}

namespace {

std::string resolve_path(const std::string& path, const std::string& base_dir) {
    std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

FeatureMatrix extract_features(const Signal& segment, const EvalConfig& cfg,
                               std::uint64_t seed) {
    SiftConfig sift = cfg.sift;
    sift.rng_seed = seed;
    HhhcConfig hhhc = cfg.hhhc;
    hhhc.jobs = cfg.jobs;
    switch (cfg.feature) {
        case FeatureMode::hhhc:
            return extract_hhhc(segment, sift, hhhc);
        case FeatureMode::hhhc_ins:
            return extract_hhhc_ins(segment, sift, cfg.ins, InsAppend::median, hhhc);
        case FeatureMode::ph:
            return extract_ph(segment);
    }
    throw Error(Status::internal_error, "unreachable feature mode");
}

struct VoicedFile {
    std::size_t entry = 0;
    Signal voiced;
};

} // namespace

EvalReport run_evaluation(const CorpusManifest& manifest, const EvalConfig& cfg,
                          const std::string& manifest_dir) {
    validate_manifest(manifest, true);
    const auto folds = build_loso_folds(manifest);
    const auto labels = manifest.labels();
    const auto segment_len = static_cast<std::size_t>(
        std::lround(cfg.test_segment_ms / 1000.0 * 8000.0));

    EvalReport report;
    report.confusion.labels = labels;
    report.confusion.counts.assign(labels.size(),
                                   std::vector<long>(labels.size(), 0));
    auto label_index = [&](const std::string& label) {
        return static_cast<std::size_t>(
            std::lower_bound(labels.begin(), labels.end(), label) - labels.begin());
    };
    auto warn = [&](const std::string& msg) { report.warnings.push_back(msg); };

    // voiced speech is prepared once per file and reused across folds
    std::vector<Signal> voiced_cache(manifest.entries.size());
    std::vector<bool> voiced_ok(manifest.entries.size(), false);
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        const auto& entry = manifest.entries[i];
        try {
            const Signal raw = load_wav(resolve_path(entry.path, manifest_dir));
            voiced_cache[i] = select_voiced(resample_to_8k(raw), cfg.voiced);
            voiced_ok[i] = true;
        } catch (const Error& e) {
            warn(entry.path + ": " + e.what() + " (file skipped)");
        }
    }

    for (std::size_t f = 0; f < folds.size(); ++f) {
        const auto& fold = folds[f];
        const std::uint64_t fold_seed = derive_seed(cfg.seed, f + 1);

        // one model per label from the training speakers' pooled voiced chunks
        std::vector<AlphaGmmModel> models;
        for (std::size_t li = 0; li < labels.size(); ++li) {
            const auto& label = labels[li];
            const std::uint64_t label_seed = derive_seed(fold_seed, li + 1);

            std::vector<Signal> chunks;
            for (std::size_t idx : fold.train_indices) {
                if (manifest.entries[idx].label != label || !voiced_ok[idx]) continue;
                const auto& voiced = voiced_cache[idx];
                const std::size_t n_chunks = voiced.samples.size() / segment_len;
                for (std::size_t c = 0; c < n_chunks; ++c) {
                    Signal chunk;
                    chunk.sample_rate_hz = 8000;
                    chunk.samples.assign(
                        voiced.samples.begin() + static_cast<std::ptrdiff_t>(c * segment_len),
                        voiced.samples.begin() +
                            static_cast<std::ptrdiff_t>((c + 1) * segment_len));
                    chunks.push_back(std::move(chunk));
                }
            }
            if (chunks.empty())
                throw Error(Status::invalid_argument,
                            "fold " + std::to_string(f) + ": no voiced training audio for label '" +
                                label + "'");

            const auto needed = static_cast<std::size_t>(std::ceil(
                cfg.train_seconds * 8000.0 / static_cast<double>(segment_len)));
            std::vector<std::size_t> order(chunks.size());
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), make_rng(derive_seed(label_seed, 0xD)));
            if (order.size() < needed) {
                const double got = static_cast<double>(order.size() * segment_len) / 8000.0;
                warn("fold " + std::to_string(f) + ", label '" + label + "': only " +
                     std::to_string(got) + " s voiced training audio (< " +
                     std::to_string(cfg.train_seconds) + " s), using all of it");
            }
            order.resize(std::min(order.size(), needed));

            FeatureMatrix train_features;
            for (std::size_t c = 0; c < order.size(); ++c)
                append_rows(train_features,
                            extract_features(chunks[order[c]], cfg,
                                             derive_seed(label_seed, 100 + c)));

            TrainConfig train_cfg = cfg.train;
            train_cfg.seed = derive_seed(label_seed, 0x7);
            models.push_back(train_alpha_gmm(train_features, label, train_cfg, nullptr,
                                             nullptr));
        }

        // per-fold per-label tallies
        std::map<std::string, std::pair<long, long>> fold_counts;

        for (std::size_t ti = 0; ti < fold.test_indices.size(); ++ti) {
            const std::size_t idx = fold.test_indices[ti];
            if (!voiced_ok[idx]) continue;
            const auto& entry = manifest.entries[idx];
            const auto& voiced = voiced_cache[idx];
            const std::size_t n_segments = voiced.samples.size() / segment_len;
            if (n_segments == 0) {
                warn(entry.path + ": voiced audio shorter than one test segment");
                continue;
            }
            const std::uint64_t file_seed = derive_seed(fold_seed, 50000 + idx);
            for (std::size_t s = 0; s < n_segments; ++s) {
                Signal segment;
                segment.sample_rate_hz = 8000;
                segment.samples.assign(
                    voiced.samples.begin() + static_cast<std::ptrdiff_t>(s * segment_len),
                    voiced.samples.begin() +
                        static_cast<std::ptrdiff_t>((s + 1) * segment_len));
                const auto features =
                    extract_features(segment, cfg, derive_seed(file_seed, s + 1));
                const auto result = classify_sequence(features, models);
                const auto& predicted = models[result.best].label;

                report.confusion.counts[label_index(entry.label)]
                                       [label_index(predicted)]++;
                auto& tally = fold_counts[entry.label];
                ++tally.first;
                if (predicted == entry.label) ++tally.second;

                const std::string segment_id = entry.path + "#" + std::to_string(s);
                for (std::size_t mi = 0; mi < models.size(); ++mi)
                    report.scores.push_back({f, segment_id, entry.label, predicted,
                                             models[mi].label, result.scores[mi]});
            }
        }

        for (const auto& [label, tally] : fold_counts)
            report.per_fold.push_back(
                {f, fold.test_speaker, label, tally.first, tally.second});
    }
    return report;
}

void write_report(const EvalReport& report, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto& cm = report.confusion;

    std::vector<std::string> confusion_lines;
    {
        std::vector<std::string> header{"actual"};
        header.insert(header.end(), cm.labels.begin(), cm.labels.end());
        confusion_lines.push_back(join_csv(header));
        for (std::size_t i = 0; i < cm.labels.size(); ++i) {
            std::vector<std::string> row{cm.labels[i]};
            for (long c : cm.counts[i]) row.push_back(std::to_string(c));
            confusion_lines.push_back(join_csv(row));
        }
    }
    write_lines(out_dir + "/confusion.csv", confusion_lines);

    std::vector<std::string> summary_lines{"name,value"};
    for (std::size_t i = 0; i < cm.labels.size(); ++i)
        summary_lines.push_back(join_csv(
            {"accuracy_" + cm.labels[i], format_double(cm.per_class_accuracy(i))}));
    summary_lines.push_back(join_csv({"average", format_double(cm.average())}));
    summary_lines.push_back(join_csv({"uar", format_double(cm.uar())}));
    write_lines(out_dir + "/summary.csv", summary_lines);

    std::vector<std::string> fold_lines{"fold,test_speaker,label,segments,correct,accuracy_pct"};
    for (const auto& row : report.per_fold) {
        const double acc = row.segments > 0
                               ? 100.0 * static_cast<double>(row.correct) /
                                     static_cast<double>(row.segments)
                               : 0.0;
        fold_lines.push_back(join_csv({std::to_string(row.fold), row.test_speaker,
                                       row.label, std::to_string(row.segments),
                                       std::to_string(row.correct),
                                       format_double(acc)}));
    }
    write_lines(out_dir + "/per_fold.csv", fold_lines);

    std::vector<std::string> score_lines{"fold,segment,actual,predicted,model,score"};
    for (const auto& row : report.scores)
        score_lines.push_back(join_csv({std::to_string(row.fold), row.segment_id,
                                        row.actual, row.predicted, row.model,
                                        format_double(row.score)}));
    write_lines(out_dir + "/scores.csv", score_lines);
}

} // namespace affect
