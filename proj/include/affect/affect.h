/* affect: affective speech analysis library.
 *
 * C interface over the signal pipeline: WAV ingestion, EMD/EEMD
 * decomposition, wavelet Hurst estimation, HHHC feature extraction, the
 * surrogate-based index of non-stationarity, alpha-integrated Gaussian
 * mixture classification, and the leave-one-speaker-out evaluation harness.
 *
 * All objects are opaque handles created by affect_* constructors and
 * released with the matching *_free call. Functions return AFFECT_OK on
 * success; affect_last_error() describes the most recent failure on the
 * calling thread.
 */

#ifndef AFFECT_H
#define AFFECT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum affect_status {
    AFFECT_OK = 0,
    AFFECT_ERR_IO = 1,
    AFFECT_ERR_FORMAT = 2,
    AFFECT_ERR_INVALID_ARGUMENT = 3,
    AFFECT_ERR_NO_VOICED_FRAMES = 4,
    AFFECT_ERR_TOO_SHORT = 5,
    AFFECT_ERR_UNTESTABLE = 6,
    AFFECT_ERR_INTERNAL = 7
} affect_status;

const char* affect_status_name(affect_status status);

/* Message for the last failing call on this thread; empty string if none. */
const char* affect_last_error(void);

/* ---------------- signals ---------------- */

typedef struct affect_signal affect_signal;

affect_status affect_signal_load_wav(const char* path, affect_signal** out);
affect_status affect_signal_create(const double* samples, size_t count,
                                   int sample_rate_hz, affect_signal** out);
affect_status affect_signal_save_wav(const affect_signal* signal, const char* path);
affect_status affect_signal_resample_8k(const affect_signal* signal,
                                        affect_signal** out);
affect_status affect_signal_select_voiced(const affect_signal* signal,
                                          double frame_ms, double energy_quantile,
                                          double zcr_quantile, affect_signal** out);
size_t affect_signal_length(const affect_signal* signal);
int affect_signal_rate(const affect_signal* signal);
const double* affect_signal_samples(const affect_signal* signal);
void affect_signal_free(affect_signal* signal);

/* ---------------- decomposition ---------------- */

typedef struct affect_sift_config {
    int max_imfs;          /* default 6 */
    int max_sift_iters;    /* default 50 */
    double sd_threshold;   /* default 0.2 */
    int ensemble_trials;   /* default 100 */
    double noise_std;      /* relative to segment std, default 0.01 */
    uint64_t seed;
} affect_sift_config;

void affect_sift_config_init(affect_sift_config* cfg);

typedef struct affect_imfset affect_imfset;

affect_status affect_emd(const double* x, size_t count,
                         const affect_sift_config* cfg, affect_imfset** out);
affect_status affect_eemd(const double* x, size_t count,
                          const affect_sift_config* cfg, int jobs,
                          affect_imfset** out);
size_t affect_imfset_modes(const affect_imfset* set);
size_t affect_imfset_length(const affect_imfset* set);
const double* affect_imfset_mode(const affect_imfset* set, size_t index);
const double* affect_imfset_residual(const affect_imfset* set);
/* CSV dump with columns t,imf1..imfM,residual. */
affect_status affect_imfset_save_csv(const affect_imfset* set, const char* path);
void affect_imfset_free(affect_imfset* set);

/* ---------------- Hurst ---------------- */

typedef struct affect_hurst_result {
    double h;
    double theta;
    int scale_min;
    int scale_max;
    int valid;
    int clamped;
} affect_hurst_result;

affect_status affect_hurst_estimate(const double* x, size_t count, int scale_min,
                                    int scale_max, affect_hurst_result* out);

/* ---------------- features ---------------- */

typedef struct affect_features affect_features;

/* pH baseline: 50 ms frames every 10 ms, wavelet scales 2..12. */
affect_status affect_extract_ph(const affect_signal* signal, affect_features** out);

affect_status affect_extract_hhhc(const affect_signal* signal,
                                  const affect_sift_config* cfg, int use_eemd,
                                  int jobs, affect_features** out);

typedef struct affect_ins_config {
    int scale_count;   /* default 10 */
    double scale_min;  /* default 0.0015 */
    double scale_max;  /* default 0.5 */
    int surrogates;    /* default 50 */
    uint64_t seed;
} affect_ins_config;

void affect_ins_config_init(affect_ins_config* cfg);

/* full_profile = 0 appends one INS median per IMF, nonzero appends the whole
 * per-scale grid. */
affect_status affect_extract_hhhc_ins(const affect_signal* signal,
                                      const affect_sift_config* cfg,
                                      const affect_ins_config* ins, int full_profile,
                                      int jobs, affect_features** out);

size_t affect_features_rows(const affect_features* features);
size_t affect_features_dim(const affect_features* features);
const double* affect_features_row(const affect_features* features, size_t row);
const char* affect_features_column_name(const affect_features* features, size_t col);
const char* affect_features_source_id(const affect_features* features);
affect_status affect_features_save_csv(const affect_features* features,
                                       const char* path);
affect_status affect_features_load_csv(const char* path, affect_features** out);
void affect_features_free(affect_features* features);

/* ---------------- index of non-stationarity ---------------- */

typedef struct affect_ins_profile affect_ins_profile;

typedef struct affect_ins_point {
    double scale;
    double ins;
    double gamma;
    int nonstationary;
    int feasible;
    int testable;
} affect_ins_point;

/* INS of one series over the configured scale grid. */
affect_status affect_ins_compute(const double* x, size_t count,
                                 const affect_ins_config* cfg,
                                 affect_ins_profile** out);
/* Per-IMF profiles over the grid; profile index = IMF index. */
affect_status affect_ins_for_imfs(const affect_imfset* set,
                                  const affect_ins_config* cfg,
                                  affect_ins_profile** out);
size_t affect_ins_profile_count(const affect_ins_profile* profile);
size_t affect_ins_profile_scales(const affect_ins_profile* profile);
affect_status affect_ins_profile_point(const affect_ins_profile* profile,
                                       size_t series, size_t scale_index,
                                       affect_ins_point* out);
void affect_ins_profile_free(affect_ins_profile* profile);

/* ---------------- alpha-GMM ---------------- */

typedef struct affect_model affect_model;

affect_status affect_model_train(const affect_features* features, const char* label,
                                 int mixtures, double alpha, int max_iters,
                                 double tol, uint64_t seed, affect_model** out);
affect_status affect_model_save(const affect_model* model, const char* path);
affect_status affect_model_load(const char* path, affect_model** out);
const char* affect_model_label(const affect_model* model);
double affect_model_alpha(const affect_model* model);
int affect_model_mixtures(const affect_model* model);
int affect_model_dim(const affect_model* model);
affect_status affect_model_log_likelihood(const affect_model* model, const double* x,
                                          size_t dim, double* out);
/* Summed log-likelihood argmax over models; scores (optional) receives one
 * value per model. */
affect_status affect_classify(const affect_features* features,
                              const affect_model* const* models, size_t n_models,
                              size_t* best_index, double* scores);
void affect_model_free(affect_model* model);

/* ---------------- evaluation ---------------- */

typedef struct affect_eval_config {
    const char* feature_mode; /* "hhhc", "hhhc+ins", "ph" */
    affect_sift_config sift;
    affect_ins_config ins;
    double voiced_frame_ms;
    double voiced_energy_quantile;
    double voiced_zcr_quantile;
    int mixtures;
    double alpha;
    int max_iters;
    double tol;
    double train_seconds;
    int test_segment_ms;
    uint64_t seed;
    int jobs;
} affect_eval_config;

void affect_eval_config_init(affect_eval_config* cfg);

/* Runs the LOSO protocol over the manifest (CSV header path,label,speaker;
 * relative paths resolve against the manifest directory) and writes
 * confusion.csv, summary.csv, per_fold.csv, scores.csv to out_dir.
 * average_accuracy (optional) receives the unweighted mean of per-class
 * accuracies in percent. */
affect_status affect_evaluate(const char* manifest_path,
                              const affect_eval_config* cfg, const char* out_dir,
                              double* average_accuracy);

/* Synthetic labeled corpus: per label an fGn carrier with the given Hurst
 * value, amplitude modulation and tone mixture derived from it. Writes WAVs
 * plus manifest.csv into out_dir. */
affect_status affect_synth_corpus(const char* out_dir, const char* const* labels,
                                  const double* hursts, size_t n_labels,
                                  int n_speakers, double seconds_per_label,
                                  uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif /* AFFECT_H */
