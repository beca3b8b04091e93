#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arr2/data.hpp"
#include "arr2/distributions.hpp"

namespace arr2::dgp {

/// The three AR coefficient sets used in the AR simulations.
std::vector<double> minnesota_phi();
std::vector<double> oscillation_phi();
std::vector<double> delayed_phi();
/// "minnesota", "oscillation" or "delayed".
std::vector<double> ar_phi_by_name(const std::string& name);

struct ArDgp {
    std::vector<double> phi = minnesota_phi();
    double sigma2 = 1.0;
    int T = 120;
    int burn_in = 500;
    /// When set, no burn-in: y[0] = y0 with zero pre-sample values.
    std::optional<double> y0;
};

struct ArxDgp {
    int m = 20;
    double rho = 0.0;
    int block = 5;
    double varrho = 0.59;
    std::vector<double> phi = minnesota_phi();
    double sigma2 = 1.0;
    int T = 120;
    int burn_in = 500;
};

struct LtxDgp {
    double phi_state = 0.95;
    double sigma_delta = 1.0;
    int m = 5;
    double rho = 0.0;
    int block = 5;
    double varrho = 0.59;
    int lags = 4;
    double sigma2 = 1.0;
    int T = 200;
    /// When set, the state starts here instead of its stationary distribution.
    std::optional<double> delta0;
};

/// Simulated data plus the true parameters behind it.
struct Simulation {
    TimeSeriesData data;
    std::vector<double> phi;
    std::vector<double> beta;   ///< LTX: lag coefficients, covariate-major
    std::vector<double> delta;  ///< LTX state path, delta[0..T-1]
    double sigma = 1.0;
    double sigma_delta = 0.0;
    double phi_state = 0.0;
};

/// Block-diagonal covariance: unit diagonal, rho within blocks of `block`.
Eigen::MatrixXd block_covariance(int m, double rho, int block);
/// Nonzero pattern (varrho, varrho/2, varrho/4) over the first three blocks, zeros after.
std::vector<double> block_beta(int m, double varrho, int block);

Simulation simulate_ar(const ArDgp& dgp, Rng& rng);
Simulation simulate_arx(const ArxDgp& dgp, Rng& rng);
/**
 * @brief Local trend with lagged covariates.
 *
 * Column i*lags + (j-1) holds covariate i at time t-j+1, with coefficient
 * beta_i / j^2.
 */
Simulation simulate_ltx(const LtxDgp& dgp, Rng& rng);

}  // namespace arr2::dgp
