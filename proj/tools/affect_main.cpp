// affect: command-line front end over the libaffect C API.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <algorithm>
#include <thread>
#include <vector>

#include "affect/affect.h"

namespace {

[[noreturn]] void die(affect_status status) {
    std::cerr << "error: " << affect_status_name(status) << ": "
              << affect_last_error() << "\n";
    std::exit(2);
}

void check(affect_status status) {
    if (status != AFFECT_OK) die(status);
}

// Every artifact-producing run logs its effective configuration (defaults
// included) next to the main output. Keys are exactly the subcommand's flag
// names, so a sidecar is itself a valid --config file; informational lines go
// in as comments.
class Sidecar {
public:
    explicit Sidecar(const std::string& subcommand) {
        note("affect " + subcommand);
    }

    void add(const std::string& key, const std::string& value) {
        entries_.emplace_back(key, value);
    }
    void add(const std::string& key, double value) {
        std::ostringstream ss;
        ss.precision(17);
        ss << value;
        add(key, ss.str());
    }
    void add(const std::string& key, std::uint64_t value) {
        add(key, std::to_string(value));
    }
    void add(const std::string& key, const char* value) {
        add(key, std::string(value));
    }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add(const std::string& key, bool value) {
        add(key, std::string(value ? "true" : "false"));
    }

    void note(const std::string& text) { entries_.emplace_back("#", text); }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) {
            std::cerr << "error: cannot write sidecar " << path << "\n";
            std::exit(2);
        }
        for (const auto& [k, v] : entries_) {
            if (k == "#")
                out << "# " << v << "\n";
            else
                out << k << " = " << v << "\n";
        }
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

struct SignalHandle {
    affect_signal* ptr = nullptr;
    ~SignalHandle() { affect_signal_free(ptr); }
};

// load -> resample to 8 kHz -> optional voiced-frame selection
affect_signal* load_prepared(const std::string& path, bool voiced, double energy_q,
                             double zcr_q) {
    SignalHandle raw, resampled;
    check(affect_signal_load_wav(path.c_str(), &raw.ptr));
    check(affect_signal_resample_8k(raw.ptr, &resampled.ptr));
    if (!voiced) {
        affect_signal* out = resampled.ptr;
        resampled.ptr = nullptr;
        return out;
    }
    affect_signal* out = nullptr;
    check(affect_signal_select_voiced(resampled.ptr, 16.0, energy_q, zcr_q, &out));
    return out;
}

void add_sift_flags(CLI::App* cmd, affect_sift_config& sift, bool& use_emd) {
    cmd->add_option("--max-imfs", sift.max_imfs, "IMF count (zero-padded if fewer)")
        ->capture_default_str();
    cmd->add_option("--max-sift-iters", sift.max_sift_iters, "sifting iteration cap")
        ->capture_default_str();
    cmd->add_option("--sd-threshold", sift.sd_threshold, "sifting SD stop threshold")
        ->capture_default_str();
    cmd->add_option("--trials", sift.ensemble_trials, "EEMD ensemble trials")
        ->capture_default_str();
    cmd->add_option("--noise-std", sift.noise_std,
                    "EEMD noise std relative to segment std")
        ->capture_default_str();
    cmd->add_flag("--emd", use_emd, "plain EMD instead of EEMD");
}

void sift_sidecar(Sidecar& sc, const affect_sift_config& sift, bool use_emd) {
    sc.add("emd", use_emd);
    sc.add("max-imfs", sift.max_imfs);
    sc.add("max-sift-iters", sift.max_sift_iters);
    sc.add("sd-threshold", sift.sd_threshold);
    sc.add("trials", sift.ensemble_trials);
    sc.add("noise-std", sift.noise_std);
}

std::string verdict_text(const affect_ins_point& p) {
    if (!p.feasible) return "infeasible";
    if (!p.testable) return "untestable";
    return p.nonstationary ? "non-stationary" : "stationary";
}

int default_jobs() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

// Expands `--config <file>` into --key=value tokens placed right after the
// subcommand, so explicit flags (parsed later, take-last policy) override the
// file. Keys are the flag names without dashes, one `key = value` per line.
std::vector<std::string> expand_config(int argc, char** argv,
                                       const std::vector<std::string>& subcommands) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::size_t sub_pos = args.size();
    for (std::size_t i = 0; i < args.size(); ++i) {
        for (const auto& name : subcommands)
            if (args[i] == name) {
                sub_pos = i;
                break;
            }
        if (sub_pos != args.size()) break;
    }
    std::string config_path;
    for (std::size_t i = sub_pos; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            config_path = args[i].substr(9);
    }
    if (config_path.empty() || sub_pos == args.size()) return args;

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot read config file " << config_path << "\n";
        std::exit(2);
    }
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: bad config line '" << line << "' in " << config_path
                      << "\n";
            std::exit(1);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || key == "config") continue;
        injected.push_back("--" + key + "=" + value);
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1,
                injected.begin(), injected.end());
    return args;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"affective speech analysis: EMD/EEMD decomposition, Hurst "
                 "features, stationarity index, alpha-GMM classification"};
    app.require_subcommand(1);

    // ---- decompose ----
    auto* decompose = app.add_subcommand("decompose", "decompose a WAV into IMFs");
    decompose->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string dec_config;
    decompose->add_option("--config", dec_config, "key = value config file");
    std::string dec_in, dec_out;
    affect_sift_config dec_sift;
    affect_sift_config_init(&dec_sift);
    bool dec_emd = false, dec_voiced = false;
    int dec_jobs = default_jobs();
    std::uint64_t dec_seed = 0;
    decompose->add_option("--in", dec_in, "input WAV")->required();
    decompose->add_option("--out", dec_out, "output CSV (t,imf1..imfM,residual)")
        ->required();
    add_sift_flags(decompose, dec_sift, dec_emd);
    decompose->add_flag("--voiced", dec_voiced, "keep only voiced frames first");
    decompose->add_option("--seed", dec_seed, "RNG seed")->capture_default_str();
    decompose->add_option("--jobs", dec_jobs, "worker threads")->capture_default_str();

    // ---- hurst (pH feature) ----
    auto* hurst = app.add_subcommand("hurst", "pH feature: frame-wise Hurst values");
    hurst->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string ph_config;
    hurst->add_option("--config", ph_config, "key = value config file");
    std::string ph_in, ph_out;
    bool ph_no_voiced = false;
    double ph_energy_q = 0.5, ph_zcr_q = 0.5;
    hurst->add_option("--in", ph_in, "input WAV")->required();
    hurst->add_option("--out", ph_out, "output feature CSV")->required();
    hurst->add_flag("--no-voiced", ph_no_voiced, "skip voiced-frame selection");
    hurst->add_option("--energy-quantile", ph_energy_q, "voicing energy quantile")
        ->capture_default_str();
    hurst->add_option("--zcr-quantile", ph_zcr_q, "voicing ZCR quantile")
        ->capture_default_str();

    // ---- hhhc ----
    auto* hhhc = app.add_subcommand("hhhc", "HHHC feature extraction");
    hhhc->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string hh_config;
    hhhc->add_option("--config", hh_config, "key = value config file");
    std::string hh_in, hh_out;
    affect_sift_config hh_sift;
    affect_sift_config_init(&hh_sift);
    affect_ins_config hh_ins;
    affect_ins_config_init(&hh_ins);
    bool hh_emd = false, hh_with_ins = false, hh_ins_full = false, hh_no_voiced = false;
    double hh_energy_q = 0.5, hh_zcr_q = 0.5;
    std::uint64_t hh_seed = 0;
    int hh_jobs = default_jobs();
    hhhc->add_option("--in", hh_in, "input WAV")->required();
    hhhc->add_option("--out", hh_out, "output feature CSV")->required();
    add_sift_flags(hhhc, hh_sift, hh_emd);
    hhhc->add_flag("--ins", hh_with_ins, "append per-IMF INS medians (HHHC+INS)");
    hhhc->add_flag("--ins-full", hh_ins_full, "append the full per-scale INS grid");
    hhhc->add_option("--surrogates", hh_ins.surrogates, "INS surrogate count")
        ->capture_default_str();
    hhhc->add_option("--scales", hh_ins.scale_count, "INS observation scales")
        ->capture_default_str();
    hhhc->add_flag("--no-voiced", hh_no_voiced, "skip voiced-frame selection");
    hhhc->add_option("--energy-quantile", hh_energy_q, "voicing energy quantile")
        ->capture_default_str();
    hhhc->add_option("--zcr-quantile", hh_zcr_q, "voicing ZCR quantile")
        ->capture_default_str();
    hhhc->add_option("--seed", hh_seed, "RNG seed")->capture_default_str();
    hhhc->add_option("--jobs", hh_jobs, "worker threads")->capture_default_str();

    // ---- ins ----
    auto* ins = app.add_subcommand("ins", "index of non-stationarity profile");
    ins->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string ins_config_path;
    ins->add_option("--config", ins_config_path, "key = value config file");
    std::string ins_in, ins_out;
    affect_ins_config ins_cfg;
    affect_ins_config_init(&ins_cfg);
    affect_sift_config ins_sift;
    affect_sift_config_init(&ins_sift);
    bool ins_per_imf = false, ins_voiced = false;
    std::uint64_t ins_seed = 0;
    ins->add_option("--in", ins_in, "input WAV")->required();
    ins->add_option("--out", ins_out, "output CSV (default stdout)");
    ins->add_option("--scales", ins_cfg.scale_count, "observation scale count")
        ->capture_default_str();
    ins->add_option("--scale-min", ins_cfg.scale_min, "smallest T_h/T ratio")
        ->capture_default_str();
    ins->add_option("--scale-max", ins_cfg.scale_max, "largest T_h/T ratio")
        ->capture_default_str();
    ins->add_option("--surrogates", ins_cfg.surrogates, "surrogate count")
        ->capture_default_str();
    ins->add_flag("--per-imf", ins_per_imf, "profile each IMF of an EEMD decomposition");
    ins->add_option("--trials", ins_sift.ensemble_trials, "EEMD trials for --per-imf")
        ->capture_default_str();
    ins->add_option("--noise-std", ins_sift.noise_std, "EEMD noise std for --per-imf")
        ->capture_default_str();
    ins->add_flag("--voiced", ins_voiced, "keep only voiced frames first");
    ins->add_option("--seed", ins_seed, "RNG seed")->capture_default_str();

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "generate a synthetic labeled corpus");
    synth->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string sy_config;
    synth->add_option("--config", sy_config, "key = value config file");
    std::string sy_out_dir;
    std::vector<std::string> sy_labels;
    int sy_speakers = 4;
    double sy_seconds = 60.0;
    std::uint64_t sy_seed = 0;
    synth->add_option("--out-dir", sy_out_dir, "output directory")->required();
    synth
        ->add_option("--label", sy_labels,
                     "label spec name=hurst, e.g. --label calm=0.8 (repeatable)")
        ->required()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->expected(-2);
    synth->add_option("--speakers", sy_speakers, "speakers per label")
        ->capture_default_str();
    synth->add_option("--seconds", sy_seconds, "seconds per label per speaker")
        ->capture_default_str();
    synth->add_option("--seed", sy_seed, "RNG seed")->capture_default_str();

    // ---- train ----
    auto* train = app.add_subcommand("train", "train an alpha-GMM on a feature CSV");
    train->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string tr_config;
    train->add_option("--config", tr_config, "key = value config file");
    std::string tr_features, tr_label, tr_out;
    int tr_mixtures = 32, tr_max_iters = 200;
    double tr_alpha = -4.0, tr_tol = 1e-5;
    std::uint64_t tr_seed = 0;
    train->add_option("--features", tr_features, "training feature CSV")->required();
    train->add_option("--label", tr_label, "model label")->required();
    train->add_option("--out", tr_out, "output model file")->required();
    train->add_option("--alpha", tr_alpha, "alpha (<= -1; -1 is the plain GMM)")
        ->capture_default_str();
    train->add_option("--mixtures", tr_mixtures, "Gaussian component count")
        ->capture_default_str();
    train->add_option("--max-iters", tr_max_iters, "EM iteration cap")
        ->capture_default_str();
    train->add_option("--tol", tr_tol, "EM objective tolerance")->capture_default_str();
    train->add_option("--seed", tr_seed, "RNG seed")->capture_default_str();

    // ---- classify ----
    auto* classify = app.add_subcommand("classify", "score a feature CSV against models");
    classify->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string cl_config;
    classify->add_option("--config", cl_config, "key = value config file");
    std::string cl_features, cl_out;
    std::vector<std::string> cl_models;
    classify->add_option("--features", cl_features, "feature CSV to classify")
        ->required();
    classify->add_option("--model", cl_models, "model file (repeatable)")
        ->required()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->expected(-1);
    classify->add_option("--out", cl_out, "optional scores CSV");

    // ---- evaluate ----
    auto* evaluate = app.add_subcommand("evaluate", "leave-one-speaker-out evaluation");
    evaluate->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string ev_config;
    evaluate->add_option("--config", ev_config, "key = value config file");
    std::string ev_manifest, ev_out_dir, ev_feature = "hhhc", ev_alphas;
    affect_eval_config ev;
    affect_eval_config_init(&ev);
    int ev_jobs = default_jobs();
    evaluate->add_option("--manifest", ev_manifest, "corpus manifest CSV")->required();
    evaluate->add_option("--out-dir", ev_out_dir, "report directory")->required();
    evaluate->add_option("--feature", ev_feature, "hhhc | hhhc+ins | ph")
        ->capture_default_str();
    evaluate->add_option("--alpha", ev.alpha, "alpha-GMM alpha")->capture_default_str();
    evaluate->add_option("--alphas", ev_alphas,
                         "comma-separated alpha sweep, e.g. -1,-2,-4,-6,-8 "
                         "(writes one subdirectory per value)");
    evaluate->add_option("--mixtures", ev.mixtures, "Gaussian component count")
        ->capture_default_str();
    evaluate->add_option("--trials", ev.sift.ensemble_trials, "EEMD trials")
        ->capture_default_str();
    evaluate->add_option("--noise-std", ev.sift.noise_std, "EEMD noise std")
        ->capture_default_str();
    evaluate->add_option("--surrogates", ev.ins.surrogates, "INS surrogates")
        ->capture_default_str();
    evaluate->add_option("--ins-scales", ev.ins.scale_count, "INS observation scales")
        ->capture_default_str();
    evaluate->add_option("--tol", ev.tol, "EM objective tolerance")
        ->capture_default_str();
    evaluate->add_option("--train-seconds", ev.train_seconds,
                         "training audio drawn per label per fold")
        ->capture_default_str();
    evaluate->add_option("--test-ms", ev.test_segment_ms, "test segment length (ms)")
        ->capture_default_str();
    evaluate->add_option("--energy-quantile", ev.voiced_energy_quantile,
                         "voicing energy quantile")
        ->capture_default_str();
    evaluate->add_option("--zcr-quantile", ev.voiced_zcr_quantile,
                         "voicing ZCR quantile")
        ->capture_default_str();
    evaluate->add_option("--max-iters", ev.max_iters, "EM iteration cap")
        ->capture_default_str();
    evaluate->add_option("--seed", ev.seed, "RNG seed")->capture_default_str();
    evaluate->add_option("--jobs", ev_jobs, "worker threads")->capture_default_str();

    auto args = expand_config(argc, argv,
                              {"decompose", "hurst", "hhhc", "ins", "synth", "train",
                               "classify", "evaluate"});
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        std::cerr << "run with --help for usage\n";
        return 1;
    }

    if (decompose->parsed()) {
        SignalHandle sig;
        sig.ptr = load_prepared(dec_in, dec_voiced, 0.5, 0.5);
        dec_sift.seed = dec_seed;
        affect_imfset* set = nullptr;
        if (dec_emd)
            check(affect_emd(affect_signal_samples(sig.ptr),
                             affect_signal_length(sig.ptr), &dec_sift, &set));
        else
            check(affect_eemd(affect_signal_samples(sig.ptr),
                              affect_signal_length(sig.ptr), &dec_sift, dec_jobs, &set));
        check(affect_imfset_save_csv(set, dec_out.c_str()));
        affect_imfset_free(set);

        Sidecar sc("decompose");
        sc.add("in", dec_in);
        sc.add("out", dec_out);
        sift_sidecar(sc, dec_sift, dec_emd);
        sc.add("voiced", dec_voiced);
        sc.add("seed", dec_seed);
        sc.add("jobs", dec_jobs);
        sc.write(dec_out + ".config");
        return 0;
    }

    if (hurst->parsed()) {
        SignalHandle sig;
        sig.ptr = load_prepared(ph_in, !ph_no_voiced, ph_energy_q, ph_zcr_q);
        affect_features* features = nullptr;
        check(affect_extract_ph(sig.ptr, &features));
        check(affect_features_save_csv(features, ph_out.c_str()));
        const size_t rows = affect_features_rows(features);
        affect_features_free(features);
        std::cout << "wrote " << rows << " pH frames to " << ph_out << "\n";

        Sidecar sc("hurst");
        sc.add("in", ph_in);
        sc.add("out", ph_out);
        sc.add("no-voiced", ph_no_voiced);
        sc.add("energy-quantile", ph_energy_q);
        sc.add("zcr-quantile", ph_zcr_q);
        sc.note("50 ms frames every 10 ms, wavelet scales 2-12");
        sc.write(ph_out + ".config");
        return 0;
    }

    if (hhhc->parsed()) {
        SignalHandle sig;
        sig.ptr = load_prepared(hh_in, !hh_no_voiced, hh_energy_q, hh_zcr_q);
        hh_sift.seed = hh_seed;
        hh_ins.seed = hh_seed;
        affect_features* features = nullptr;
        if (hh_with_ins || hh_ins_full)
            check(affect_extract_hhhc_ins(sig.ptr, &hh_sift, &hh_ins,
                                          hh_ins_full ? 1 : 0, hh_jobs, &features));
        else
            check(affect_extract_hhhc(sig.ptr, &hh_sift, hh_emd ? 0 : 1, hh_jobs,
                                      &features));
        check(affect_features_save_csv(features, hh_out.c_str()));
        const size_t rows = affect_features_rows(features);
        const size_t dim = affect_features_dim(features);
        affect_features_free(features);
        std::cout << "wrote " << rows << "x" << dim << " feature matrix to " << hh_out
                  << "\n";

        Sidecar sc("hhhc");
        sc.add("in", hh_in);
        sc.add("out", hh_out);
        sift_sidecar(sc, hh_sift, hh_emd);
        sc.add("ins", hh_with_ins);
        sc.add("ins-full", hh_ins_full);
        sc.add("surrogates", hh_ins.surrogates);
        sc.add("scales", hh_ins.scale_count);
        sc.add("no-voiced", hh_no_voiced);
        sc.add("energy-quantile", hh_energy_q);
        sc.add("zcr-quantile", hh_zcr_q);
        sc.add("seed", hh_seed);
        sc.add("jobs", hh_jobs);
        sc.write(hh_out + ".config");
        return 0;
    }

    if (ins->parsed()) {
        SignalHandle sig;
        sig.ptr = load_prepared(ins_in, ins_voiced, 0.5, 0.5);
        ins_cfg.seed = ins_seed;
        ins_sift.seed = ins_seed;

        std::ostringstream csv;
        affect_ins_profile* profile = nullptr;
        if (ins_per_imf) {
            affect_imfset* set = nullptr;
            check(affect_eemd(affect_signal_samples(sig.ptr),
                              affect_signal_length(sig.ptr), &ins_sift, 1, &set));
            check(affect_ins_for_imfs(set, &ins_cfg, &profile));
            affect_imfset_free(set);
            csv << "imf,scale,ins,gamma,verdict\n";
            for (size_t m = 0; m < affect_ins_profile_count(profile); ++m)
                for (size_t s = 0; s < affect_ins_profile_scales(profile); ++s) {
                    affect_ins_point p;
                    check(affect_ins_profile_point(profile, m, s, &p));
                    csv << (m + 1) << ',' << p.scale << ',' << p.ins << ',' << p.gamma
                        << ',' << verdict_text(p) << "\n";
                }
        } else {
            check(affect_ins_compute(affect_signal_samples(sig.ptr),
                                     affect_signal_length(sig.ptr), &ins_cfg,
                                     &profile));
            csv << "scale,ins,gamma,verdict\n";
            for (size_t s = 0; s < affect_ins_profile_scales(profile); ++s) {
                affect_ins_point p;
                check(affect_ins_profile_point(profile, 0, s, &p));
                csv << p.scale << ',' << p.ins << ',' << p.gamma << ','
                    << verdict_text(p) << "\n";
            }
        }
        affect_ins_profile_free(profile);

        if (ins_out.empty()) {
            std::cout << csv.str();
        } else {
            std::ofstream out(ins_out);
            if (!out) die(AFFECT_ERR_IO);
            out << csv.str();

            Sidecar sc("ins");
            sc.add("in", ins_in);
            sc.add("out", ins_out);
            sc.add("scales", ins_cfg.scale_count);
            sc.add("scale-min", ins_cfg.scale_min);
            sc.add("scale-max", ins_cfg.scale_max);
            sc.add("surrogates", ins_cfg.surrogates);
            sc.add("per-imf", ins_per_imf);
            sc.add("trials", ins_sift.ensemble_trials);
            sc.add("noise-std", ins_sift.noise_std);
            sc.add("voiced", ins_voiced);
            sc.add("seed", ins_seed);
            sc.write(ins_out + ".config");
        }
        return 0;
    }

    if (synth->parsed()) {
        std::vector<std::string> names;
        std::vector<double> hursts;
        for (const auto& spec : sy_labels) {
            const auto eq = spec.find('=');
            if (eq == std::string::npos || eq == 0) {
                std::cerr << "bad --label '" << spec << "', expected name=hurst\n";
                return 1;
            }
            names.push_back(spec.substr(0, eq));
            try {
                hursts.push_back(std::stod(spec.substr(eq + 1)));
            } catch (const std::exception&) {
                std::cerr << "bad --label hurst value in '" << spec << "'\n";
                return 1;
            }
        }
        std::vector<const char*> name_ptrs;
        for (const auto& n : names) name_ptrs.push_back(n.c_str());
        check(affect_synth_corpus(sy_out_dir.c_str(), name_ptrs.data(), hursts.data(),
                                  names.size(), sy_speakers, sy_seconds, sy_seed));
        std::cout << "wrote " << names.size() * sy_speakers << " WAV files and manifest.csv to "
                  << sy_out_dir << "\n";

        Sidecar sc("synth");
        sc.add("out-dir", sy_out_dir);
        for (const auto& spec : sy_labels) sc.add("label", spec);
        sc.add("speakers", sy_speakers);
        sc.add("seconds", sy_seconds);
        sc.add("seed", sy_seed);
        sc.write((std::filesystem::path(sy_out_dir) / "run_config.txt").string());
        return 0;
    }

    if (train->parsed()) {
        affect_features* features = nullptr;
        check(affect_features_load_csv(tr_features.c_str(), &features));
        affect_model* model = nullptr;
        check(affect_model_train(features, tr_label.c_str(), tr_mixtures, tr_alpha,
                                 tr_max_iters, tr_tol, tr_seed, &model));
        affect_features_free(features);
        check(affect_model_save(model, tr_out.c_str()));
        std::cout << "trained '" << tr_label << "' (M=" << affect_model_mixtures(model)
                  << ", D=" << affect_model_dim(model) << ", alpha=" << tr_alpha
                  << ") -> " << tr_out << "\n";
        affect_model_free(model);

        Sidecar sc("train");
        sc.add("features", tr_features);
        sc.add("label", tr_label);
        sc.add("out", tr_out);
        sc.add("alpha", tr_alpha);
        sc.add("mixtures", tr_mixtures);
        sc.add("max-iters", tr_max_iters);
        sc.add("tol", tr_tol);
        sc.add("seed", tr_seed);
        sc.write(tr_out + ".config");
        return 0;
    }

    if (classify->parsed()) {
        affect_features* features = nullptr;
        check(affect_features_load_csv(cl_features.c_str(), &features));
        std::vector<affect_model*> models;
        for (const auto& path : cl_models) {
            affect_model* m = nullptr;
            check(affect_model_load(path.c_str(), &m));
            models.push_back(m);
        }
        size_t best = 0;
        std::vector<double> scores(models.size());
        check(affect_classify(features,
                              const_cast<const affect_model* const*>(models.data()),
                              models.size(), &best, scores.data()));
        std::cout << "predicted: " << affect_model_label(models[best]) << "\n";
        for (size_t i = 0; i < models.size(); ++i)
            std::cout << "  " << affect_model_label(models[i]) << ": " << scores[i]
                      << "\n";
        if (!cl_out.empty()) {
            std::ofstream out(cl_out);
            if (!out) die(AFFECT_ERR_IO);
            out << "model,score,predicted\n";
            out.precision(17);
            for (size_t i = 0; i < models.size(); ++i)
                out << affect_model_label(models[i]) << ',' << scores[i] << ','
                    << (i == best ? 1 : 0) << "\n";

            Sidecar sc("classify");
            sc.add("features", cl_features);
            for (const auto& path : cl_models) sc.add("model", path);
            sc.add("out", cl_out);
            sc.write(cl_out + ".config");
        }
        affect_features_free(features);
        for (auto* m : models) affect_model_free(m);
        return 0;
    }

    if (evaluate->parsed()) {
        ev.feature_mode = ev_feature.c_str();
        ev.jobs = ev_jobs;

        std::vector<double> alphas;
        if (!ev_alphas.empty()) {
            std::stringstream ss(ev_alphas);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) alphas.push_back(std::stod(item));
            if (alphas.empty()) {
                std::cerr << "empty --alphas list\n";
                return 1;
            }
        } else {
            alphas.push_back(ev.alpha);
        }

        auto write_eval_sidecar = [&](const std::string& dir, double alpha) {
            Sidecar sc("evaluate");
            sc.add("manifest", ev_manifest);
            sc.add("out-dir", dir);
            sc.add("feature", ev_feature);
            sc.add("alpha", alpha);
            sc.add("mixtures", ev.mixtures);
            sc.add("trials", ev.sift.ensemble_trials);
            sc.add("noise-std", ev.sift.noise_std);
            sc.add("surrogates", ev.ins.surrogates);
            sc.add("ins-scales", ev.ins.scale_count);
            sc.add("train-seconds", ev.train_seconds);
            sc.add("test-ms", ev.test_segment_ms);
            sc.add("energy-quantile", ev.voiced_energy_quantile);
            sc.add("zcr-quantile", ev.voiced_zcr_quantile);
            sc.add("max-iters", ev.max_iters);
            sc.add("tol", ev.tol);
            sc.add("seed", ev.seed);
            sc.add("jobs", ev_jobs);
            sc.write(dir + "/run_config.txt");
        };

        if (alphas.size() == 1) {
            ev.alpha = alphas[0];
            double avg = 0.0;
            std::filesystem::create_directories(ev_out_dir);
            check(affect_evaluate(ev_manifest.c_str(), &ev, ev_out_dir.c_str(), &avg));
            write_eval_sidecar(ev_out_dir, ev.alpha);
            std::cout << "average accuracy: " << avg << "%\n";
        } else {
            std::filesystem::create_directories(ev_out_dir);
            std::ofstream sweep(ev_out_dir + "/sweep_summary.csv");
            if (!sweep) die(AFFECT_ERR_IO);
            sweep << "alpha,average_accuracy_pct\n";
            sweep.precision(17);
            for (double alpha : alphas) {
                ev.alpha = alpha;
                std::ostringstream dir;
                dir << ev_out_dir << "/alpha_" << alpha;
                std::filesystem::create_directories(dir.str());
                double avg = 0.0;
                check(affect_evaluate(ev_manifest.c_str(), &ev, dir.str().c_str(),
                                      &avg));
                write_eval_sidecar(dir.str(), alpha);
                sweep << alpha << ',' << avg << "\n";
                std::cout << "alpha " << alpha << ": average accuracy " << avg << "%\n";
            }
        }
        return 0;
    }

    return 0;
}
