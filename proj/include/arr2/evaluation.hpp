#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arr2/data.hpp"
#include "arr2/distributions.hpp"
#include "arr2/models.hpp"

namespace arr2::eval {

/// sqrt(mean((a - b)^2)). Throws on empty or mismatched input.
double rmse(std::span<const double> estimate, std::span<const double> truth);

/// Posterior fitted on a training prefix: the bound model plus constrained draws.
struct FoldPosterior {
    models::Model model;
    std::vector<std::vector<double>> draws;
};

/// Fits the spec on a training prefix. Throwing or returning nullopt marks the fold failed.
using Fitter = std::function<std::optional<FoldPosterior>(const models::ModelSpec&, const TimeSeriesData&)>;

enum class LfoMode {
    Refit,  ///< refit on y[0..i-1], every `stride` folds; folds in between reuse the latest fit
    Fixed,  ///< one fit on y[0..L-1] reused for every fold
};

struct LfoConfig {
    int L = 0;   ///< first fold predicts y[L..L+M-1]
    int M = 1;
    LfoMode mode = LfoMode::Refit;
    int stride = 1;
};

struct LfoFold {
    int i = 0;
    double score = 0.0;
    bool ok = true;
};

struct LfoResult {
    std::vector<LfoFold> folds;
    double total = 0.0;  ///< sum over successful folds
    int n_scored = 0;
    int n_excluded = 0;
    [[nodiscard]] double mlpd() const { return total / static_cast<double>(n_scored); }
};

/**
 * @brief Leave-future-out elpd: folds i = L..T-M score log p(y[i..i+M-1] | y[0..i-1]).
 */
LfoResult elpd_lfo(const models::ModelSpec& spec, const TimeSeriesData& data, const LfoConfig& cfg,
                   const Fitter& fitter);

/// Scores every fold against one frozen posterior (the model must be bound to y[0..L-1] or shorter).
LfoResult elpd_lfo_frozen(const FoldPosterior& post, const TimeSeriesData& data, int L, int M);

/**
 * @brief Per-draw relative R^2 of each decomposition component.
 *
 * fraction: var(component) / sum of component variances.
 * share: fraction * Bayes R^2, so shares sum to the draw's R^2.
 * of_var_y: var(component) / var(y) over the likelihood window.
 */
struct R2Decomposition {
    std::vector<std::string> components;
    Eigen::MatrixXd share;
    Eigen::MatrixXd fraction;
    Eigen::MatrixXd of_var_y;
    std::vector<double> bayes_r2;
};

R2Decomposition r2_decomposition(const models::Model& model, const std::vector<std::vector<double>>& draws);

/**
 * @brief Relative R^2 of each lag for a fixed stationary AR(p).
 *
 * var(phi_i y_{t-i}) / var(y_t) with the stationary variance shared by
 * numerator and denominator.
 */
std::vector<double> relative_r2_conditional(std::span<const double> phi, double sigma2);

struct Summary {
    std::vector<std::string> key;
    double mean = 0.0;
    double se = 0.0;  ///< sd / sqrt(n); 0 when n == 1
    int n = 0;
};

struct Record {
    std::vector<std::string> key;
    double value = 0.0;
};

Summary summarize(std::span<const double> values);
/// Group means and standard errors, groups in order of first appearance. Non-finite values are skipped.
std::vector<Summary> aggregate(const std::vector<Record>& records);

/// Draws from the prior and what they imply.
struct Pushforward {
    std::vector<double> r2;                       ///< implied prior R^2 per draw
    std::vector<std::string> components;
    Eigen::MatrixXd contribution;                 ///< draws x components, signal_i / (total signal + sigma^2)
    std::vector<double> max_root_modulus;         ///< of the sampled AR coefficients (empty without lags)
    double nonstationary_fraction = 0.0;
};

Pushforward prior_pushforward(const models::Model& model, int draws, Rng& rng);

/// One-sample Kolmogorov-Smirnov distance against a cdf.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

}  // namespace arr2::eval
