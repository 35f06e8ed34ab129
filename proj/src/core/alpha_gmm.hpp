#ifndef AFFECT_CORE_ALPHA_GMM_HPP
#define AFFECT_CORE_ALPHA_GMM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/features.hpp"

namespace affect {

// Diagonal-covariance mixture whose component densities combine through a
// power mean of order (1 - alpha) / 2. alpha = -1 is the ordinary GMM.
struct AlphaGmmModel {
    std::string label;
    double alpha = -1.0;
    std::vector<double> weights;
    std::vector<std::vector<double>> means;
    std::vector<std::vector<double>> variances;

    std::size_t mixtures() const { return weights.size(); }
    std::size_t dim() const { return means.empty() ? 0 : means[0].size(); }
};

// log of the alpha-integrated density with the normalization constant taken
// as 1: (1/k) * logsumexp_i(log pi_i + k * log b_i(x)), k = (1 - alpha) / 2.
// Unnormalized for alpha != -1; all model comparisons share M and alpha so
// the constant cancels at the argmax.
double alpha_log_likelihood(std::span<const double> x, const AlphaGmmModel& model);

// Per-frame responsibilities r_i proportional to pi_i * b_i(x)^k.
std::vector<double> responsibilities(std::span<const double> x,
                                     const AlphaGmmModel& model);

struct TrainConfig {
    int mixtures = 32;
    double alpha = -4.0;
    int max_iters = 200;
    double tol = 1e-5;
    std::uint64_t seed = 0;
};

// Seeded k-means initialization followed by alpha-weighted EM with variance
// flooring. objective_trace, when given, receives the per-frame objective
// after each iteration.
AlphaGmmModel train_alpha_gmm(const FeatureMatrix& features, const std::string& label,
                              const TrainConfig& cfg,
                              std::vector<double>* objective_trace = nullptr,
                              std::vector<std::string>* log = nullptr);

struct ClassifyResult {
    std::size_t best = 0;
    std::vector<double> scores; // summed log-likelihood per model
};

// argmax over models of the summed frame log-likelihoods; ties go to the
// lexicographically smallest label.
ClassifyResult classify_sequence(const FeatureMatrix& features,
                                 const std::vector<AlphaGmmModel>& models);

void save_model(const AlphaGmmModel& model, const std::string& path);
AlphaGmmModel load_model(const std::string& path);

} // namespace affect

#endif
