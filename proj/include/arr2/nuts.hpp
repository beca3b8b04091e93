#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "arr2/distributions.hpp"

namespace arr2::inference {

/**
 * @brief Differentiable target density on R^n.
 */
class LogDensity {
public:
    virtual ~LogDensity() = default;
    [[nodiscard]] virtual int dim() const = 0;
    /// Returns log p(u) and writes its gradient. Non-finite results mark u as outside the support.
    virtual double log_density_gradient(std::span<const double> u, std::span<double> grad) const = 0;
};

struct SamplerConfig {
    int chains = 4;
    int warmup = 1000;
    int samples = 1000;
    double target_accept = 0.8;
    int max_treedepth = 10;
    std::uint64_t seed = 1;
    int jobs = 1;                 ///< chains run concurrently, at most this many at a time
    double init_radius = 2.0;     ///< inits drawn from uniform(-r, r)
    int init_attempts = 100;

    void validate() const;
};

/// Energy error above which a trajectory counts as divergent.
inline constexpr double kMaxDeltaH = 1000.0;

struct ChainResult {
    Eigen::MatrixXd draws;              ///< samples x dim, unconstrained
    std::vector<std::uint8_t> divergent;
    std::vector<double> energy;
    std::vector<double> accept_stat;
    std::vector<int> treedepth;
    std::vector<int> n_leapfrog;
    double stepsize = 0.0;
    Eigen::VectorXd inv_metric;
    int warmup_divergences = 0;
};

/**
 * @brief One NUTS chain with dual-averaging step size and windowed diagonal metric adaptation.
 *
 * The chain's generator is seeded with cfg.seed + chain.
 */
ChainResult nuts_chain(const LogDensity& target, const SamplerConfig& cfg, int chain,
                       std::optional<Eigen::VectorXd> init = std::nullopt);

/// cfg.chains chains; results ordered by chain index regardless of cfg.jobs.
std::vector<ChainResult> nuts_sample(const LogDensity& target, const SamplerConfig& cfg);

}  // namespace arr2::inference
