#include "affect/affect.h"

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "core/alpha_gmm.hpp"
#include "core/csv.hpp"
#include "core/emd.hpp"
#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/hhhc.hpp"
#include "core/hurst.hpp"
#include "core/ins.hpp"
#include "core/signal.hpp"
#include "core/synth.hpp"

struct affect_signal {
    affect::Signal value;
};
struct affect_imfset {
    affect::ImfSet value;
};
struct affect_features {
    affect::FeatureMatrix value;
};
struct affect_ins_profile {
    std::vector<affect::InsProfile> profiles;
};
struct affect_model {
    affect::AlphaGmmModel value;
};

namespace {

thread_local std::string g_last_error;

affect_status to_status(affect::Status s) {
    switch (s) {
        case affect::Status::ok: return AFFECT_OK;
        case affect::Status::io_error: return AFFECT_ERR_IO;
        case affect::Status::bad_format: return AFFECT_ERR_FORMAT;
        case affect::Status::invalid_argument: return AFFECT_ERR_INVALID_ARGUMENT;
        case affect::Status::no_voiced_frames: return AFFECT_ERR_NO_VOICED_FRAMES;
        case affect::Status::too_short: return AFFECT_ERR_TOO_SHORT;
        case affect::Status::untestable: return AFFECT_ERR_UNTESTABLE;
        case affect::Status::internal_error: return AFFECT_ERR_INTERNAL;
    }
    return AFFECT_ERR_INTERNAL;
}

template <typename Fn>
affect_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return AFFECT_OK;
    } catch (const affect::Error& e) {
        g_last_error = e.what();
        return to_status(e.status());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return AFFECT_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return AFFECT_ERR_INTERNAL;
    }
}

affect_status fail_arg(const char* what) {
    g_last_error = what;
    return AFFECT_ERR_INVALID_ARGUMENT;
}

affect::SiftConfig from_c(const affect_sift_config& cfg) {
    affect::SiftConfig out;
    out.max_imfs = cfg.max_imfs;
    out.max_sift_iters = cfg.max_sift_iters;
    out.sd_threshold = cfg.sd_threshold;
    out.ensemble_trials = cfg.ensemble_trials;
    out.noise_std = cfg.noise_std;
    out.rng_seed = cfg.seed;
    return out;
}

affect::InsConfig from_c(const affect_ins_config& cfg) {
    affect::InsConfig out;
    out.scale_count = cfg.scale_count;
    out.scale_min = cfg.scale_min;
    out.scale_max = cfg.scale_max;
    out.surrogates = cfg.surrogates;
    out.seed = cfg.seed;
    return out;
}

} // namespace

const char* affect_status_name(affect_status status) {
    switch (status) {
        case AFFECT_OK: return "ok";
        case AFFECT_ERR_IO: return "io error";
        case AFFECT_ERR_FORMAT: return "format error";
        case AFFECT_ERR_INVALID_ARGUMENT: return "invalid argument";
        case AFFECT_ERR_NO_VOICED_FRAMES: return "no voiced frames";
        case AFFECT_ERR_TOO_SHORT: return "input too short";
        case AFFECT_ERR_UNTESTABLE: return "untestable input";
        case AFFECT_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* affect_last_error(void) { return g_last_error.c_str(); }

/* ---------------- signals ---------------- */

affect_status affect_signal_load_wav(const char* path, affect_signal** out) {
    if (!path || !out) return fail_arg("null argument");
    return guarded([&] { *out = new affect_signal{affect::load_wav(path)}; });
}

affect_status affect_signal_create(const double* samples, size_t count,
                                   int sample_rate_hz, affect_signal** out) {
    if (!samples || !out) return fail_arg("null argument");
    return guarded([&] {
        affect::Signal s;
        s.sample_rate_hz = sample_rate_hz;
        s.samples.assign(samples, samples + count);
        affect::validate_signal(s);
        *out = new affect_signal{std::move(s)};
    });
}

affect_status affect_signal_save_wav(const affect_signal* signal, const char* path) {
    if (!signal || !path) return fail_arg("null argument");
    return guarded([&] { affect::save_wav(signal->value, path); });
}

affect_status affect_signal_resample_8k(const affect_signal* signal,
                                        affect_signal** out) {
    if (!signal || !out) return fail_arg("null argument");
    return guarded(
        [&] { *out = new affect_signal{affect::resample_to_8k(signal->value)}; });
}

affect_status affect_signal_select_voiced(const affect_signal* signal,
                                          double frame_ms, double energy_quantile,
                                          double zcr_quantile, affect_signal** out) {
    if (!signal || !out) return fail_arg("null argument");
    return guarded([&] {
        affect::VoicedParams params;
        params.frame_ms = frame_ms;
        params.energy_quantile = energy_quantile;
        params.zcr_quantile = zcr_quantile;
        *out = new affect_signal{affect::select_voiced(signal->value, params)};
    });
}

size_t affect_signal_length(const affect_signal* signal) {
    return signal ? signal->value.samples.size() : 0;
}

int affect_signal_rate(const affect_signal* signal) {
    return signal ? signal->value.sample_rate_hz : 0;
}

const double* affect_signal_samples(const affect_signal* signal) {
    return signal ? signal->value.samples.data() : nullptr;
}

void affect_signal_free(affect_signal* signal) { delete signal; }

/* ---------------- decomposition ---------------- */

void affect_sift_config_init(affect_sift_config* cfg) {
    if (!cfg) return;
    const affect::SiftConfig d;
    cfg->max_imfs = d.max_imfs;
    cfg->max_sift_iters = d.max_sift_iters;
    cfg->sd_threshold = d.sd_threshold;
    cfg->ensemble_trials = d.ensemble_trials;
    cfg->noise_std = d.noise_std;
    cfg->seed = d.rng_seed;
}

affect_status affect_emd(const double* x, size_t count,
                         const affect_sift_config* cfg, affect_imfset** out) {
    if (!x || !cfg || !out) return fail_arg("null argument");
    return guarded([&] {
        *out = new affect_imfset{affect::emd_decompose({x, count}, from_c(*cfg))};
    });
}

affect_status affect_eemd(const double* x, size_t count,
                          const affect_sift_config* cfg, int jobs,
                          affect_imfset** out) {
    if (!x || !cfg || !out) return fail_arg("null argument");
    return guarded([&] {
        *out = new affect_imfset{affect::eemd_decompose({x, count}, from_c(*cfg), jobs)};
    });
}

size_t affect_imfset_modes(const affect_imfset* set) {
    return set ? set->value.modes.size() : 0;
}

size_t affect_imfset_length(const affect_imfset* set) {
    return set ? set->value.input_len : 0;
}

const double* affect_imfset_mode(const affect_imfset* set, size_t index) {
    if (!set || index >= set->value.modes.size()) return nullptr;
    return set->value.modes[index].data();
}

const double* affect_imfset_residual(const affect_imfset* set) {
    return set ? set->value.residual.data() : nullptr;
}

affect_status affect_imfset_save_csv(const affect_imfset* set, const char* path) {
    if (!set || !path) return fail_arg("null argument");
    return guarded([&] {
        const auto& imfs = set->value;
        std::vector<std::string> header{"t"};
        for (std::size_t m = 1; m <= imfs.modes.size(); ++m)
            header.push_back("imf" + std::to_string(m));
        header.push_back("residual");
        std::vector<std::string> lines{affect::join_csv(header)};
        for (std::size_t i = 0; i < imfs.input_len; ++i) {
            std::vector<std::string> row{std::to_string(i)};
            for (const auto& mode : imfs.modes)
                row.push_back(affect::format_double(mode[i]));
            row.push_back(affect::format_double(imfs.residual[i]));
            lines.push_back(affect::join_csv(row));
        }
        affect::write_lines(path, lines);
    });
}

void affect_imfset_free(affect_imfset* set) { delete set; }

/* ---------------- Hurst ---------------- */

affect_status affect_hurst_estimate(const double* x, size_t count, int scale_min,
                                    int scale_max, affect_hurst_result* out) {
    if (!x || !out) return fail_arg("null argument");
    return guarded([&] {
        const auto est = affect::hurst_of_series({x, count}, scale_min, scale_max);
        out->h = est.h;
        out->theta = est.theta;
        out->scale_min = est.scale_min;
        out->scale_max = est.scale_max;
        out->valid = est.valid ? 1 : 0;
        out->clamped = est.clamped ? 1 : 0;
    });
}

/* ---------------- features ---------------- */

affect_status affect_extract_ph(const affect_signal* signal, affect_features** out) {
    if (!signal || !out) return fail_arg("null argument");
    return guarded(
        [&] { *out = new affect_features{affect::extract_ph(signal->value)}; });
}

affect_status affect_extract_hhhc(const affect_signal* signal,
                                  const affect_sift_config* cfg, int use_eemd,
                                  int jobs, affect_features** out) {
    if (!signal || !cfg || !out) return fail_arg("null argument");
    return guarded([&] {
        affect::HhhcConfig hhhc;
        hhhc.use_eemd = use_eemd != 0;
        hhhc.jobs = jobs;
        *out = new affect_features{
            affect::extract_hhhc(signal->value, from_c(*cfg), hhhc)};
    });
}

void affect_ins_config_init(affect_ins_config* cfg) {
    if (!cfg) return;
    const affect::InsConfig d;
    cfg->scale_count = d.scale_count;
    cfg->scale_min = d.scale_min;
    cfg->scale_max = d.scale_max;
    cfg->surrogates = d.surrogates;
    cfg->seed = d.seed;
}

affect_status affect_extract_hhhc_ins(const affect_signal* signal,
                                      const affect_sift_config* cfg,
                                      const affect_ins_config* ins, int full_profile,
                                      int jobs, affect_features** out) {
    if (!signal || !cfg || !ins || !out) return fail_arg("null argument");
    return guarded([&] {
        affect::HhhcConfig hhhc;
        hhhc.jobs = jobs;
        *out = new affect_features{affect::extract_hhhc_ins(
            signal->value, from_c(*cfg), from_c(*ins),
            full_profile ? affect::InsAppend::full : affect::InsAppend::median, hhhc)};
    });
}

size_t affect_features_rows(const affect_features* features) {
    return features ? features->value.rows.size() : 0;
}

size_t affect_features_dim(const affect_features* features) {
    return features ? features->value.dim() : 0;
}

const double* affect_features_row(const affect_features* features, size_t row) {
    if (!features || row >= features->value.rows.size()) return nullptr;
    return features->value.rows[row].data();
}

const char* affect_features_column_name(const affect_features* features, size_t col) {
    if (!features || col >= features->value.schema.size()) return nullptr;
    return features->value.schema[col].c_str();
}

const char* affect_features_source_id(const affect_features* features) {
    return features ? features->value.source_id.c_str() : nullptr;
}

affect_status affect_features_save_csv(const affect_features* features,
                                       const char* path) {
    if (!features || !path) return fail_arg("null argument");
    return guarded([&] { affect::save_feature_csv(features->value, path); });
}

affect_status affect_features_load_csv(const char* path, affect_features** out) {
    if (!path || !out) return fail_arg("null argument");
    return guarded(
        [&] { *out = new affect_features{affect::load_feature_csv(path)}; });
}

void affect_features_free(affect_features* features) { delete features; }

/* ---------------- index of non-stationarity ---------------- */

affect_status affect_ins_compute(const double* x, size_t count,
                                 const affect_ins_config* cfg,
                                 affect_ins_profile** out) {
    if (!x || !cfg || !out) return fail_arg("null argument");
    return guarded([&] {
        const auto c = from_c(*cfg);
        const auto scales = affect::ins_scale_grid(c);
        auto profile = affect::ins_profile({x, count}, scales, c.surrogates, c.seed);
        auto* result = new affect_ins_profile;
        result->profiles.push_back(std::move(profile));
        *out = result;
    });
}

affect_status affect_ins_for_imfs(const affect_imfset* set,
                                  const affect_ins_config* cfg,
                                  affect_ins_profile** out) {
    if (!set || !cfg || !out) return fail_arg("null argument");
    return guarded([&] {
        auto* result = new affect_ins_profile;
        result->profiles = affect::ins_for_imfs(set->value, from_c(*cfg));
        *out = result;
    });
}

size_t affect_ins_profile_count(const affect_ins_profile* profile) {
    return profile ? profile->profiles.size() : 0;
}

size_t affect_ins_profile_scales(const affect_ins_profile* profile) {
    if (!profile || profile->profiles.empty()) return 0;
    return profile->profiles[0].points.size();
}

affect_status affect_ins_profile_point(const affect_ins_profile* profile,
                                       size_t series, size_t scale_index,
                                       affect_ins_point* out) {
    if (!profile || !out) return fail_arg("null argument");
    if (series >= profile->profiles.size() ||
        scale_index >= profile->profiles[series].points.size())
        return fail_arg("index out of range");
    const auto& p = profile->profiles[series].points[scale_index];
    out->scale = p.scale;
    out->ins = p.ins;
    out->gamma = p.gamma;
    out->nonstationary = p.nonstationary ? 1 : 0;
    out->feasible = p.feasible ? 1 : 0;
    out->testable = p.testable ? 1 : 0;
    return AFFECT_OK;
}

void affect_ins_profile_free(affect_ins_profile* profile) { delete profile; }

/* ---------------- alpha-GMM ---------------- */

affect_status affect_model_train(const affect_features* features, const char* label,
                                 int mixtures, double alpha, int max_iters,
                                 double tol, uint64_t seed, affect_model** out) {
    if (!features || !label || !out) return fail_arg("null argument");
    return guarded([&] {
        affect::TrainConfig cfg;
        cfg.mixtures = mixtures;
        cfg.alpha = alpha;
        cfg.max_iters = max_iters;
        cfg.tol = tol;
        cfg.seed = seed;
        *out = new affect_model{
            affect::train_alpha_gmm(features->value, label, cfg)};
    });
}

affect_status affect_model_save(const affect_model* model, const char* path) {
    if (!model || !path) return fail_arg("null argument");
    return guarded([&] { affect::save_model(model->value, path); });
}

affect_status affect_model_load(const char* path, affect_model** out) {
    if (!path || !out) return fail_arg("null argument");
    return guarded([&] { *out = new affect_model{affect::load_model(path)}; });
}

const char* affect_model_label(const affect_model* model) {
    return model ? model->value.label.c_str() : nullptr;
}

double affect_model_alpha(const affect_model* model) {
    return model ? model->value.alpha : 0.0;
}

int affect_model_mixtures(const affect_model* model) {
    return model ? static_cast<int>(model->value.mixtures()) : 0;
}

int affect_model_dim(const affect_model* model) {
    return model ? static_cast<int>(model->value.dim()) : 0;
}

affect_status affect_model_log_likelihood(const affect_model* model, const double* x,
                                          size_t dim, double* out) {
    if (!model || !x || !out) return fail_arg("null argument");
    return guarded(
        [&] { *out = affect::alpha_log_likelihood({x, dim}, model->value); });
}

affect_status affect_classify(const affect_features* features,
                              const affect_model* const* models, size_t n_models,
                              size_t* best_index, double* scores) {
    if (!features || !models || !best_index) return fail_arg("null argument");
    return guarded([&] {
        std::vector<affect::AlphaGmmModel> list;
        list.reserve(n_models);
        for (size_t i = 0; i < n_models; ++i) {
            if (!models[i])
                throw affect::Error(affect::Status::invalid_argument, "null model");
            list.push_back(models[i]->value);
        }
        const auto result = affect::classify_sequence(features->value, list);
        *best_index = result.best;
        if (scores)
            std::memcpy(scores, result.scores.data(),
                        sizeof(double) * result.scores.size());
    });
}

void affect_model_free(affect_model* model) { delete model; }

/* ---------------- evaluation ---------------- */

void affect_eval_config_init(affect_eval_config* cfg) {
    if (!cfg) return;
    const affect::EvalConfig d;
    cfg->feature_mode = "hhhc";
    affect_sift_config_init(&cfg->sift);
    affect_ins_config_init(&cfg->ins);
    cfg->voiced_frame_ms = d.voiced.frame_ms;
    cfg->voiced_energy_quantile = d.voiced.energy_quantile;
    cfg->voiced_zcr_quantile = d.voiced.zcr_quantile;
    cfg->mixtures = d.train.mixtures;
    cfg->alpha = d.train.alpha;
    cfg->max_iters = d.train.max_iters;
    cfg->tol = d.train.tol;
    cfg->train_seconds = d.train_seconds;
    cfg->test_segment_ms = d.test_segment_ms;
    cfg->seed = d.seed;
    cfg->jobs = d.jobs;
}

affect_status affect_evaluate(const char* manifest_path,
                              const affect_eval_config* cfg, const char* out_dir,
                              double* average_accuracy) {
    if (!manifest_path || !cfg || !out_dir || !cfg->feature_mode)
        return fail_arg("null argument");
    return guarded([&] {
        affect::EvalConfig c;
        c.feature = affect::parse_feature_mode(cfg->feature_mode);
        c.sift = from_c(cfg->sift);
        c.ins = from_c(cfg->ins);
        c.voiced.frame_ms = cfg->voiced_frame_ms;
        c.voiced.energy_quantile = cfg->voiced_energy_quantile;
        c.voiced.zcr_quantile = cfg->voiced_zcr_quantile;
        c.train.mixtures = cfg->mixtures;
        c.train.alpha = cfg->alpha;
        c.train.max_iters = cfg->max_iters;
        c.train.tol = cfg->tol;
        c.train_seconds = cfg->train_seconds;
        c.test_segment_ms = cfg->test_segment_ms;
        c.seed = cfg->seed;
        c.jobs = cfg->jobs;

        const auto manifest = affect::load_manifest(manifest_path);
        const auto manifest_dir =
            std::filesystem::path(manifest_path).parent_path().string();
        const auto report = affect::run_evaluation(manifest, c, manifest_dir);
        affect::write_report(report, out_dir);
        if (average_accuracy) *average_accuracy = report.confusion.average();
    });
}

affect_status affect_synth_corpus(const char* out_dir, const char* const* labels,
                                  const double* hursts, size_t n_labels,
                                  int n_speakers, double seconds_per_label,
                                  uint64_t seed) {
    if (!out_dir || !labels || !hursts) return fail_arg("null argument");
    return guarded([&] {
        std::vector<affect::LabelSpec> specs;
        specs.reserve(n_labels);
        for (size_t i = 0; i < n_labels; ++i) {
            if (!labels[i])
                throw affect::Error(affect::Status::invalid_argument, "null label");
            specs.push_back(affect::label_spec_from_hurst(labels[i], hursts[i]));
        }
        affect::synth_corpus(specs, n_speakers, seconds_per_label, seed, out_dir);
    });
}
