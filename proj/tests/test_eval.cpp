#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <vector>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/hurst.hpp"
#include "core/signal.hpp"
#include "core/synth.hpp"

using namespace affect;

namespace {

std::string fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("affect_eval_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

CorpusManifest fake_manifest(int speakers, const std::vector<std::string>& labels) {
    CorpusManifest m;
    for (int s = 1; s <= speakers; ++s)
        for (const auto& label : labels)
            m.entries.push_back({label + "_spk" + std::to_string(s) + ".wav", label,
                                 "spk" + std::to_string(s)});
    return m;
}

std::vector<char> file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

EvalConfig fast_ph_eval(std::uint64_t seed) {
    EvalConfig cfg;
    cfg.feature = FeatureMode::ph;
    cfg.train.mixtures = 2;
    cfg.train.alpha = -2.0;
    cfg.train_seconds = 6.0;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("LOSO folds exclude the held-out speaker") {
    const auto manifest = fake_manifest(10, {"a", "b"});
    const auto folds = build_loso_folds(manifest);
    REQUIRE(folds.size() == 10);
    for (const auto& fold : folds) {
        std::set<std::string> train_speakers;
        for (auto idx : fold.train_indices)
            train_speakers.insert(manifest.entries[idx].speaker);
        CHECK(train_speakers.size() == 9);
        CHECK(train_speakers.count(fold.test_speaker) == 0);
        for (auto idx : fold.test_indices)
            CHECK(manifest.entries[idx].speaker == fold.test_speaker);
        CHECK(fold.train_indices.size() + fold.test_indices.size() ==
              manifest.entries.size());
    }
}

TEST_CASE("two speakers give two folds; one speaker is an error") {
    CHECK(build_loso_folds(fake_manifest(2, {"a", "b"})).size() == 2);
    CHECK_THROWS_AS(build_loso_folds(fake_manifest(1, {"a", "b"})), Error);
}

TEST_CASE("confusion matrix arithmetic matches the unweighted average definition") {
    ConfusionMatrix cm;
    cm.labels = {"anger", "joy", "sad"};
    cm.counts = {{8, 2, 0}, {1, 6, 3}, {0, 0, 10}};
    CHECK(cm.row_sum(0) == 10);
    CHECK(cm.per_class_accuracy(0) == doctest::Approx(80.0));
    CHECK(cm.per_class_accuracy(1) == doctest::Approx(60.0));
    CHECK(cm.per_class_accuracy(2) == doctest::Approx(100.0));
    CHECK(cm.average() == doctest::Approx(80.0));
    CHECK(cm.uar() == doctest::Approx(cm.average()));
}

TEST_CASE("synthetic corpus bookkeeping and determinism") {
    const auto dir = fresh_dir("synth");
    const std::vector<LabelSpec> specs{label_spec_from_hurst("hot", 0.3),
                                       label_spec_from_hurst("calm", 0.8)};
    const auto manifest = synth_corpus(specs, 4, 2.0, 77, dir);
    CHECK(manifest.entries.size() == 8);
    CHECK(manifest.labels() == std::vector<std::string>{"calm", "hot"});
    CHECK(manifest.speakers().size() == 4);
    for (const auto& e : manifest.entries) {
        const auto path = std::filesystem::path(dir) / e.path;
        CHECK(std::filesystem::exists(path));
        const Signal s = load_wav(path.string());
        CHECK(s.sample_rate_hz == 8000);
        CHECK(s.samples.size() == 16000);
    }
    CHECK(std::filesystem::exists(std::filesystem::path(dir) / "manifest.csv"));

    SUBCASE("same seed reproduces bitwise-identical audio") {
        const auto dir2 = fresh_dir("synth_again");
        synth_corpus(specs, 4, 2.0, 77, dir2);
        for (const auto& e : manifest.entries)
            CHECK(file_bytes((std::filesystem::path(dir) / e.path).string()) ==
                  file_bytes((std::filesystem::path(dir2) / e.path).string()));
    }

    SUBCASE("a different seed changes the audio") {
        const auto dir3 = fresh_dir("synth_other");
        synth_corpus(specs, 4, 2.0, 78, dir3);
        CHECK(file_bytes((std::filesystem::path(dir) / "hot_spk1.wav").string()) !=
              file_bytes((std::filesystem::path(dir3) / "hot_spk1.wav").string()));
    }
}

TEST_CASE("high-arousal label has lower mean pH than low-arousal") {
    const auto dir = fresh_dir("ph_order");
    const std::vector<LabelSpec> specs{label_spec_from_hurst("hot", 0.3),
                                       label_spec_from_hurst("calm", 0.8)};
    synth_corpus(specs, 1, 10.0, 41, dir);
    auto mean_ph = [&](const std::string& name) {
        const Signal s = load_wav((std::filesystem::path(dir) / name).string());
        const auto m = extract_ph(s);
        double sum = 0.0;
        for (const auto& row : m.rows) sum += row[0];
        return sum / static_cast<double>(m.rows.size());
    };
    CHECK(mean_ph("hot_spk1.wav") < mean_ph("calm_spk1.wav"));
}

TEST_CASE("evaluation harness runs the LOSO protocol deterministically") {
    const auto dir = fresh_dir("run");
    const std::vector<LabelSpec> specs{label_spec_from_hurst("hot", 0.3),
                                       label_spec_from_hurst("calm", 0.8)};
    const auto manifest = synth_corpus(specs, 2, 12.0, 3, dir);

    const EvalConfig cfg = fast_ph_eval(9);
    const auto report = run_evaluation(manifest, cfg, dir);

    const auto& cm = report.confusion;
    REQUIRE(cm.labels.size() == 2);
    long total = 0;
    for (std::size_t i = 0; i < cm.labels.size(); ++i) total += cm.row_sum(i);
    CHECK(total > 0);

    // per-fold tallies sum to the confusion totals
    long fold_total = 0;
    for (const auto& row : report.per_fold) fold_total += row.segments;
    CHECK(fold_total == total);

    // one scores row per (segment, model)
    CHECK(report.scores.size() == static_cast<std::size_t>(total) * cm.labels.size());

    SUBCASE("identical seeds produce identical confusion matrices") {
        const auto again = run_evaluation(manifest, cfg, dir);
        CHECK(again.confusion.counts == cm.counts);
        CHECK(again.scores.size() == report.scores.size());
    }

    SUBCASE("row sums are conserved across feature modes") {
        EvalConfig hhhc_cfg = fast_ph_eval(9);
        hhhc_cfg.feature = FeatureMode::hhhc;
        hhhc_cfg.sift.ensemble_trials = 2;
        const auto hhhc_report = run_evaluation(manifest, hhhc_cfg, dir);
        for (std::size_t i = 0; i < cm.labels.size(); ++i)
            CHECK(hhhc_report.confusion.row_sum(i) == cm.row_sum(i));
    }

    SUBCASE("report files are written with the documented headers") {
        const auto out = fresh_dir("report");
        write_report(report, out);
        const auto confusion = read_lines(out + "/confusion.csv");
        REQUIRE(confusion.size() == 3);
        CHECK(confusion[0] == "actual,calm,hot");
        const auto summary = read_lines(out + "/summary.csv");
        CHECK(summary[0] == "name,value");
        CHECK(summary.size() == 5); // two classes + average + uar
        const auto per_fold = read_lines(out + "/per_fold.csv");
        CHECK(per_fold[0] == "fold,test_speaker,label,segments,correct,accuracy_pct");
        const auto scores = read_lines(out + "/scores.csv");
        CHECK(scores[0] == "fold,segment,actual,predicted,model,score");
        CHECK(scores.size() == report.scores.size() + 1);
    }
}

TEST_CASE("training pools below the requested duration warn and proceed") {
    const auto dir = fresh_dir("short");
    const std::vector<LabelSpec> specs{label_spec_from_hurst("hot", 0.3),
                                       label_spec_from_hurst("calm", 0.8)};
    const auto manifest = synth_corpus(specs, 2, 6.0, 5, dir);
    EvalConfig cfg = fast_ph_eval(2);
    cfg.train_seconds = 32.0;
    const auto report = run_evaluation(manifest, cfg, dir);
    bool warned = false;
    for (const auto& w : report.warnings)
        if (w.find("voiced training audio") != std::string::npos) warned = true;
    CHECK(warned);
}

TEST_CASE("widening the class separation does not hurt accuracy") {
    const auto narrow_dir = fresh_dir("narrow");
    const auto wide_dir = fresh_dir("wide");
    const std::vector<LabelSpec> narrow{label_spec_from_hurst("a", 0.45),
                                        label_spec_from_hurst("b", 0.55)};
    const std::vector<LabelSpec> wide{label_spec_from_hurst("a", 0.3),
                                      label_spec_from_hurst("b", 0.8)};
    const auto narrow_manifest = synth_corpus(narrow, 2, 12.0, 13, narrow_dir);
    const auto wide_manifest = synth_corpus(wide, 2, 12.0, 13, wide_dir);

    const EvalConfig cfg = fast_ph_eval(4);
    const double acc_narrow =
        run_evaluation(narrow_manifest, cfg, narrow_dir).confusion.average();
    const double acc_wide =
        run_evaluation(wide_manifest, cfg, wide_dir).confusion.average();
    CHECK(acc_wide >= acc_narrow);
}
