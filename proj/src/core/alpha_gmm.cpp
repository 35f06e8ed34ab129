#include "core/alpha_gmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"

namespace affect {

namespace {

double log_diag_gaussian(std::span<const double> x, std::span<const double> mean,
                         std::span<const double> var) {
    double acc = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double diff = x[d] - mean[d];
        acc += std::log(2.0 * std::numbers::pi * var[d]) + diff * diff / var[d];
    }
    return -0.5 * acc;
}

double power_order(const AlphaGmmModel& model) { return (1.0 - model.alpha) / 2.0; }

void component_log_terms(std::span<const double> x, const AlphaGmmModel& model,
                         std::vector<double>& terms) {
    const double k = power_order(model);
    terms.resize(model.mixtures());
    for (std::size_t i = 0; i < model.mixtures(); ++i) {
        const double lb = log_diag_gaussian(x, model.means[i], model.variances[i]);
        terms[i] = (model.weights[i] > 0.0 ? std::log(model.weights[i])
                                           : -std::numeric_limits<double>::infinity()) +
                   k * lb;
    }
}

double logsumexp(std::span<const double> v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double t : v) m = std::max(m, t);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double t : v) s += std::exp(t - m);
    return m + std::log(s);
}

void check_model_input(std::span<const double> x, const AlphaGmmModel& model) {
    if (x.size() != model.dim())
        throw Error(Status::invalid_argument,
                    "feature dim " + std::to_string(x.size()) + " != model dim " +
                        std::to_string(model.dim()));
    for (double v : x)
        if (!std::isfinite(v))
            throw Error(Status::invalid_argument, "non-finite feature vector");
}

} // namespace

double alpha_log_likelihood(std::span<const double> x, const AlphaGmmModel& model) {
    check_model_input(x, model);
    thread_local std::vector<double> terms;
    component_log_terms(x, model, terms);
    return logsumexp(terms) / power_order(model);
}

std::vector<double> responsibilities(std::span<const double> x,
                                     const AlphaGmmModel& model) {
    check_model_input(x, model);
    std::vector<double> terms;
    component_log_terms(x, model, terms);
    const double lse = logsumexp(terms);
    std::vector<double> r(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) r[i] = std::exp(terms[i] - lse);
    return r;
}

namespace {

// Farthest-point k-means seeding plus a few Lloyd iterations.
std::vector<std::size_t> kmeans_assign(const std::vector<std::vector<double>>& rows,
                                       std::vector<std::vector<double>>& centers,
                                       std::size_t m, std::uint64_t seed) {
    const std::size_t q = rows.size();
    const std::size_t dim = rows[0].size();
    auto rng = make_rng(seed);

    auto dist2 = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = a[d] - b[d];
            s += diff * diff;
        }
        return s;
    };

    centers.clear();
    centers.push_back(rows[std::uniform_int_distribution<std::size_t>(0, q - 1)(rng)]);
    std::vector<double> nearest(q, std::numeric_limits<double>::infinity());
    while (centers.size() < m) {
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t t = 0; t < q; ++t) {
            nearest[t] = std::min(nearest[t], dist2(rows[t], centers.back()));
            if (nearest[t] > far_d) {
                far_d = nearest[t];
                far = t;
            }
        }
        centers.push_back(rows[far]);
    }

    std::vector<std::size_t> assign(q, 0);
    for (int iter = 0; iter < 10; ++iter) {
        for (std::size_t t = 0; t < q; ++t) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                const double d = dist2(rows[t], centers[i]);
                if (d < best) {
                    best = d;
                    assign[t] = i;
                }
            }
        }
        std::vector<std::vector<double>> sums(m, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(m, 0);
        for (std::size_t t = 0; t < q; ++t) {
            for (std::size_t d = 0; d < dim; ++d) sums[assign[t]][d] += rows[t][d];
            ++counts[assign[t]];
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (counts[i] == 0) {
                // reseed an empty cluster at the point farthest from its center
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t t = 0; t < q; ++t) {
                    const double d = dist2(rows[t], centers[assign[t]]);
                    if (d > far_d) {
                        far_d = d;
                        far = t;
                    }
                }
                centers[i] = rows[far];
            } else {
                for (std::size_t d = 0; d < dim; ++d)
                    centers[i][d] = sums[i][d] / static_cast<double>(counts[i]);
            }
        }
    }
    for (std::size_t t = 0; t < q; ++t) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const double d = dist2(rows[t], centers[i]);
            if (d < best) {
                best = d;
                assign[t] = i;
            }
        }
    }
    return assign;
}

} // namespace

AlphaGmmModel train_alpha_gmm(const FeatureMatrix& features, const std::string& label,
                              const TrainConfig& cfg,
                              std::vector<double>* objective_trace,
                              std::vector<std::string>* log) {
    validate_features(features);
    if (cfg.alpha > -1.0)
        throw Error(Status::invalid_argument, "alpha must be <= -1");
    if (cfg.mixtures < 1)
        throw Error(Status::invalid_argument, "mixtures must be >= 1");
    const std::size_t q = features.row_count();
    const auto m = static_cast<std::size_t>(cfg.mixtures);
    if (q < 2 * m)
        throw Error(Status::invalid_argument,
                    "need at least " + std::to_string(2 * m) + " feature rows, got " +
                        std::to_string(q));
    const std::size_t dim = features.dim();
    const auto& rows = features.rows;

    // variance floor from the per-dimension data variance
    std::vector<double> data_var(dim, 0.0), data_mean(dim, 0.0), floor(dim);
    for (const auto& row : rows)
        for (std::size_t d = 0; d < dim; ++d) data_mean[d] += row[d];
    for (std::size_t d = 0; d < dim; ++d) data_mean[d] /= static_cast<double>(q);
    for (const auto& row : rows)
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = row[d] - data_mean[d];
            data_var[d] += diff * diff;
        }
    double mean_var = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        data_var[d] /= static_cast<double>(q);
        mean_var += data_var[d];
    }
    mean_var /= static_cast<double>(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        // near-constant dimensions (e.g. clamped Hurst slots) must not floor
        // at ~0 and collapse into delta components
        floor[d] = std::max(1e-6 * data_var[d], 1e-6 * mean_var);
        if (floor[d] <= 0.0) floor[d] = 1e-12;
    }

    AlphaGmmModel model;
    model.label = label;
    model.alpha = cfg.alpha;
    model.weights.assign(m, 1.0 / static_cast<double>(m));
    model.means.assign(m, std::vector<double>(dim, 0.0));
    model.variances.assign(m, std::vector<double>(dim, 0.0));

    std::vector<std::vector<double>> centers;
    const auto assign = kmeans_assign(rows, centers, m, cfg.seed);
    {
        std::vector<std::size_t> counts(m, 0);
        for (std::size_t t = 0; t < q; ++t) ++counts[assign[t]];
        for (std::size_t i = 0; i < m; ++i) {
            model.means[i] = centers[i];
            model.weights[i] = std::max(counts[i], std::size_t{1}) /
                               static_cast<double>(q);
        }
        const double wsum =
            std::accumulate(model.weights.begin(), model.weights.end(), 0.0);
        for (auto& w : model.weights) w /= wsum;
        for (std::size_t i = 0; i < m; ++i) {
            auto& var = model.variances[i];
            std::size_t count = 0;
            for (std::size_t t = 0; t < q; ++t) {
                if (assign[t] != i) continue;
                ++count;
                for (std::size_t d = 0; d < dim; ++d) {
                    const double diff = rows[t][d] - model.means[i][d];
                    var[d] += diff * diff;
                }
            }
            for (std::size_t d = 0; d < dim; ++d) {
                var[d] = count > 1 ? var[d] / static_cast<double>(count) : data_var[d];
                var[d] = std::max(var[d], floor[d]);
            }
        }
    }

    auto objective = [&] {
        double s = 0.0;
        for (const auto& row : rows) s += alpha_log_likelihood(row, model);
        return s / static_cast<double>(q);
    };

    std::vector<std::vector<double>> resp(q);
    double prev_obj = objective();
    if (objective_trace) objective_trace->push_back(prev_obj);

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        for (std::size_t t = 0; t < q; ++t) resp[t] = responsibilities(rows[t], model);

        bool reseeded = false;
        std::vector<double> mass(m, 0.0);
        for (std::size_t t = 0; t < q; ++t)
            for (std::size_t i = 0; i < m; ++i) mass[i] += resp[t][i];

        for (std::size_t i = 0; i < m; ++i) {
            if (mass[i] >= 1e-8) continue;
            // dead component: reseed at the point the model explains worst
            std::size_t worst = 0;
            double worst_ll = std::numeric_limits<double>::infinity();
            for (std::size_t t = 0; t < q; ++t) {
                const double ll = alpha_log_likelihood(rows[t], model);
                if (ll < worst_ll) {
                    worst_ll = ll;
                    worst = t;
                }
            }
            model.means[i] = rows[worst];
            model.variances[i] = data_var;
            for (std::size_t d = 0; d < dim; ++d)
                model.variances[i][d] = std::max(model.variances[i][d], floor[d]);
            model.weights[i] = 1.0 / static_cast<double>(m);
            const double wsum =
                std::accumulate(model.weights.begin(), model.weights.end(), 0.0);
            for (auto& w : model.weights) w /= wsum;
            if (log)
                log->push_back("iter " + std::to_string(iter) + ": reseeded component " +
                               std::to_string(i));
            reseeded = true;
        }
        if (reseeded) continue;

        for (std::size_t i = 0; i < m; ++i) {
            model.weights[i] = mass[i] / static_cast<double>(q);
            auto& mu = model.means[i];
            std::fill(mu.begin(), mu.end(), 0.0);
            for (std::size_t t = 0; t < q; ++t)
                for (std::size_t d = 0; d < dim; ++d) mu[d] += resp[t][i] * rows[t][d];
            for (std::size_t d = 0; d < dim; ++d) mu[d] /= mass[i];

            auto& var = model.variances[i];
            std::fill(var.begin(), var.end(), 0.0);
            for (std::size_t t = 0; t < q; ++t)
                for (std::size_t d = 0; d < dim; ++d) {
                    const double diff = rows[t][d] - mu[d];
                    var[d] += resp[t][i] * diff * diff;
                }
            for (std::size_t d = 0; d < dim; ++d)
                var[d] = std::max(var[d] / mass[i], floor[d]);
        }

        const double obj = objective();
        if (objective_trace) objective_trace->push_back(obj);
        if (std::abs(obj - prev_obj) < cfg.tol) break;
        prev_obj = obj;
    }
    return model;
}

ClassifyResult classify_sequence(const FeatureMatrix& features,
                                 const std::vector<AlphaGmmModel>& models) {
    validate_features(features);
    if (models.empty())
        throw Error(Status::invalid_argument, "no models to classify against");
    if (features.rows.empty())
        throw Error(Status::invalid_argument, "no feature rows to classify");
    for (const auto& model : models) {
        if (model.dim() != features.dim())
            throw Error(Status::invalid_argument,
                        "model '" + model.label + "' dim " +
                            std::to_string(model.dim()) + " != feature dim " +
                            std::to_string(features.dim()));
        if (model.alpha != models[0].alpha)
            throw Error(Status::invalid_argument, "models disagree on alpha");
    }

    ClassifyResult result;
    result.scores.assign(models.size(), 0.0);
    for (const auto& row : features.rows)
        for (std::size_t i = 0; i < models.size(); ++i)
            result.scores[i] += alpha_log_likelihood(row, models[i]);

    result.best = 0;
    for (std::size_t i = 1; i < models.size(); ++i) {
        if (result.scores[i] > result.scores[result.best] ||
            (result.scores[i] == result.scores[result.best] &&
             models[i].label < models[result.best].label))
            result.best = i;
    }
    return result;
}

void save_model(const AlphaGmmModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Status::io_error, "cannot write " + path);
    out << "affect_gmm_model 1\n";
    out << "label " << model.label << '\n';
    out << "alpha " << format_double(model.alpha) << '\n';
    out << "mixtures " << model.mixtures() << '\n';
    out << "dim " << model.dim() << '\n';
    out << "weights\n";
    for (std::size_t i = 0; i < model.mixtures(); ++i)
        out << format_double(model.weights[i]) << (i + 1 < model.mixtures() ? ' ' : '\n');
    out << "means\n";
    for (const auto& mu : model.means) {
        for (std::size_t d = 0; d < mu.size(); ++d)
            out << format_double(mu[d]) << (d + 1 < mu.size() ? ' ' : '\n');
    }
    out << "variances\n";
    for (const auto& var : model.variances) {
        for (std::size_t d = 0; d < var.size(); ++d)
            out << format_double(var[d]) << (d + 1 < var.size() ? ' ' : '\n');
    }
    if (!out) throw Error(Status::io_error, "write failed for " + path);
}

AlphaGmmModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Status::io_error, "cannot open " + path);
    auto fail = [&](const std::string& why) -> Error {
        return Error(Status::bad_format, path + ": " + why);
    };

    std::string line;
    if (!std::getline(in, line) || line != "affect_gmm_model 1")
        throw fail("bad magic line");

    AlphaGmmModel model;
    std::size_t mixtures = 0, dim = 0;
    if (!std::getline(in, line) || line.rfind("label ", 0) != 0) throw fail("missing label");
    model.label = line.substr(6);
    if (!std::getline(in, line) || line.rfind("alpha ", 0) != 0) throw fail("missing alpha");
    model.alpha = std::stod(line.substr(6));
    if (!std::getline(in, line) || line.rfind("mixtures ", 0) != 0)
        throw fail("missing mixtures");
    mixtures = std::stoul(line.substr(9));
    if (!std::getline(in, line) || line.rfind("dim ", 0) != 0) throw fail("missing dim");
    dim = std::stoul(line.substr(4));
    if (mixtures == 0 || dim == 0) throw fail("degenerate model size");
    if (model.alpha > -1.0) throw fail("alpha must be <= -1");

    auto read_row = [&](std::size_t count) {
        std::vector<double> row(count);
        if (!std::getline(in, line)) throw fail("truncated file");
        std::istringstream ss(line);
        for (std::size_t i = 0; i < count; ++i)
            if (!(ss >> row[i])) throw fail("short numeric row");
        return row;
    };

    if (!std::getline(in, line) || line != "weights") throw fail("missing weights");
    model.weights = read_row(mixtures);
    if (!std::getline(in, line) || line != "means") throw fail("missing means");
    for (std::size_t i = 0; i < mixtures; ++i) model.means.push_back(read_row(dim));
    if (!std::getline(in, line) || line != "variances") throw fail("missing variances");
    for (std::size_t i = 0; i < mixtures; ++i) model.variances.push_back(read_row(dim));

    double wsum = 0.0;
    for (double w : model.weights) {
        if (w < 0.0) throw fail("negative mixture weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9) throw fail("mixture weights do not sum to 1");
    for (const auto& var : model.variances)
        for (double v : var)
            if (!(v > 0.0)) throw fail("non-positive variance");
    return model;
}

} // namespace affect
