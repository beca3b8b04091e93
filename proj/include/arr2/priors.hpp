#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arr2/distributions.hpp"

namespace arr2::priors {

enum class PriorKind { Arr2, Minnesota, Rhs, Gaussian };

/// Deterministic per-lag weights used for grouped covariate decompositions.
enum class LagWeights { None, Flat, Minnesota };

struct Arr2Config {
    double mu_r2 = 1.0 / 3.0;
    double phi_r2 = 3.0;
    std::string scheme = "minnesota";  ///< minnesota | flat | sparse
    std::vector<double> xi;            ///< explicit concentrations, overrides scheme when non-empty
    LagWeights group_weights = LagWeights::None;
    double exog_xi_scale = 1.0;        ///< multiplies exogenous concentrations
};

struct MinnesotaConfig {
    dist::GammaShapeRate kappa1{1.0, 25.0};
    dist::GammaShapeRate kappa2{1.0, 625.0};
};

/**
 * @brief Regularised horseshoe settings.
 *
 * p0 <= 0 means "half the number of lags" (or half the coefficients when
 * there are no lags). The slab c ~ Student-t+(df, 0, scale) enters as
 * c^2 ~ InvGamma(df / 2, df * scale^2 / 2).
 */
struct RhsConfig {
    double p0 = 0.0;
    double slab_df = 4.0;
    double slab_scale = 2.0;
};

struct GaussianConfig {
    double sd = 1.0;
};

struct PriorSpec {
    PriorKind kind = PriorKind::Arr2;
    Arr2Config arr2;
    MinnesotaConfig minnesota;
    RhsConfig rhs;
    GaussianConfig gaussian;
    /// Observation scale prior; unset means HalfNormal(sd = sample sd of y).
    std::optional<dist::ScalarDist> sigma_prior;
    /// sd of the normal prior on the state AR coefficient, truncated to (-1, 1).
    double state_phi_sd = 0.5;
    /// Free state innovation scale prior for the non-ARR2 priors.
    dist::ScalarDist state_scale_prior = dist::HalfNormal{3.0};
};

std::string to_string(PriorKind k);
PriorKind prior_kind_from_string(const std::string& s);
std::string to_string(LagWeights w);
LagWeights lag_weights_from_string(const std::string& s);

/// Dirichlet concentrations: p lag entries followed by m exogenous entries.
std::vector<double> arr2_concentrations(const std::string& scheme, int p, int m);

/// Weights summing to one: 1/p each (flat) or proportional to 1/j^2 (minnesota).
std::vector<double> deterministic_lag_weights(int p, LagWeights kind);

/// sigma2 / var_ref * tau2 * psi_k. Throws when var_ref is not positive.
double arr2_coeff_scale(double sigma2, double var_ref, double tau2, double psi_k);

/// p0 / (D - p0) * sigma / sqrt(n).
double rhs_tau0(double p0, int D, double sigma, double n);

/// Slab-regularised local variance c^2 lambda^2 / (c^2 + tau^2 lambda^2).
template <class T>
T rhs_lambda_tilde2(const T& lambda, const T& tau, const T& c2) {
    const T l2 = lambda * lambda;
    return c2 * l2 / (c2 + tau * tau * l2);
}

/**
 * @brief How one regression coefficient enters each prior family.
 */
struct CoefPrior {
    int component = 0;          ///< index into psi
    double weight = 1.0;        ///< deterministic group weight (1 when ungrouped)
    bool sigma_scaled = true;   ///< false for MA error-lag coefficients
    double var_ref = 1.0;       ///< sample variance of the regressor
    int kappa = 1;              ///< Minnesota: 1 for own lags, 2 for covariates
    double kappa_ratio = 1.0;   ///< Minnesota: var_y / var_x for covariates
    double decay = 1.0;         ///< Minnesota: 1 / lag^2
};

/// Weighted normal log density of coefficients with variances exp(log_var).
template <class T>
T normal_zero_lpdf_logvar(const T& x, const T& log_var) {
    using math::exp;
    return -dist::kLogSqrt2Pi - 0.5 * log_var - 0.5 * x * x * exp(-log_var);
}

}  // namespace arr2::priors
