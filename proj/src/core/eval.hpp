#ifndef AFFECT_CORE_EVAL_HPP
#define AFFECT_CORE_EVAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/alpha_gmm.hpp"
#include "core/hhhc.hpp"
#include "core/manifest.hpp"

namespace affect {

struct LosoFold {
    std::string test_speaker;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

// One fold per speaker; the held-out speaker's files never appear in train.
std::vector<LosoFold> build_loso_folds(const CorpusManifest& manifest);

enum class FeatureMode { hhhc, hhhc_ins, ph };

std::string feature_mode_name(FeatureMode mode);
FeatureMode parse_feature_mode(const std::string& name);

struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<long>> counts; // [actual][classified]

    long row_sum(std::size_t i) const;
    double per_class_accuracy(std::size_t i) const; // percent
    // unweighted mean of per-class accuracies over classes with test data;
    // identical to UAR under this definition
    double average() const;
    double uar() const { return average(); }
};

struct FoldRow {
    std::size_t fold = 0;
    std::string test_speaker;
    std::string label;
    long segments = 0;
    long correct = 0;
};

struct ScoreRow {
    std::size_t fold = 0;
    std::string segment_id;
    std::string actual;
    std::string predicted;
    std::string model;
    double score = 0.0;
};

struct EvalReport {
    ConfusionMatrix confusion;
    std::vector<FoldRow> per_fold;
    std::vector<ScoreRow> scores;
    std::vector<std::string> warnings;
};

struct EvalConfig {
    FeatureMode feature = FeatureMode::hhhc;
    SiftConfig sift;
    HhhcConfig hhhc;
    InsConfig ins;
    VoicedParams voiced;
    TrainConfig train;
    double train_seconds = 32.0;
    int test_segment_ms = 800;
    std::uint64_t seed = 0;
    int jobs = 1;
};

// Full LOSO protocol: per fold, pool voiced speech per label from the train
// speakers, draw whole test-length chunks until train_seconds is covered,
// train one model per label, then classify each test file's segments.
EvalReport run_evaluation(const CorpusManifest& manifest, const EvalConfig& cfg,
                          const std::string& manifest_dir);

// confusion.csv, summary.csv, per_fold.csv, scores.csv under out_dir.
void write_report(const EvalReport& report, const std::string& out_dir);

} // namespace affect

#endif
