#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arr2/diagnostics.hpp"
#include "arr2/models.hpp"
#include "arr2/nuts.hpp"

namespace arr2::inference {

struct GradResult {
    double logdensity = 0.0;
    std::vector<double> gradient;
    bool finite = true;
};

/// Log posterior and its reverse-mode gradient in unconstrained coordinates.
GradResult grad_logposterior(const models::Model& model, std::span<const double> u);

/**
 * @brief NUTS target wrapping a model's unconstrained log density.
 */
class ModelDensity final : public LogDensity {
public:
    explicit ModelDensity(const models::Model& model) : model_(model) {}
    [[nodiscard]] int dim() const override { return model_.dim(); }
    double log_density_gradient(std::span<const double> u, std::span<double> grad) const override;

private:
    const models::Model& model_;
};

/**
 * @brief Posterior draws in constrained space, chain-major rows.
 */
struct DrawsMatrix {
    std::vector<std::string> names;
    int chains = 0;
    int per_chain = 0;
    Eigen::MatrixXd values;  ///< (chains * per_chain) x names.size()
    std::vector<std::uint8_t> divergent;
    std::vector<double> energy;
    std::vector<double> accept_stat;
    std::vector<int> treedepth;

    [[nodiscard]] int rows() const noexcept { return static_cast<int>(values.rows()); }
    /// Column index by name; throws if absent.
    [[nodiscard]] int col(const std::string& name) const;
    [[nodiscard]] bool has(const std::string& name) const;
    /// Draws of one parameter split by chain.
    [[nodiscard]] Chains chains_of(int col) const;
    [[nodiscard]] std::vector<double> row(int r) const;
    [[nodiscard]] std::vector<std::vector<double>> all_rows() const;
    [[nodiscard]] double mean(int col) const;
};

struct ParamSummary {
    std::string name;
    double mean = 0.0;
    double sd = 0.0;
    double q05 = 0.0;
    double q50 = 0.0;
    double q95 = 0.0;
    double rhat = 0.0;
    double ess_bulk = 0.0;
    double ess_tail = 0.0;
};

struct Diagnostics {
    std::vector<ParamSummary> params;
    int divergences = 0;
    int total_draws = 0;
    std::vector<double> stepsizes;
    double inv_metric_min = 0.0;
    double inv_metric_max = 0.0;
    double max_rhat = 0.0;   ///< NaN-valued (constant) parameters are skipped
    double min_ess_bulk = 0.0;
    double min_ess_tail = 0.0;
    int max_treedepth_hits = 0;
};

/// Per-parameter summaries plus sampler-wide counts. Needs >= 2 chains of >= 4 draws for R-hat/ESS.
Diagnostics diagnose(const DrawsMatrix& draws);

struct FitResult {
    DrawsMatrix draws;
    Diagnostics diagnostics;
};

/// Runs NUTS on the model and converts draws to constrained space.
FitResult fit(const models::Model& model, const SamplerConfig& cfg);

}  // namespace arr2::inference
