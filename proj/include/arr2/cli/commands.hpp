#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arr2/cli/config.hpp"
#include "arr2/dgp.hpp"
#include "arr2/models.hpp"
#include "arr2/nuts.hpp"

namespace arr2::cli {

/**
 * @brief Prior by experiment name.
 *
 * arr2 (= arr2-minnesota), arr2-flat, arr2-sparse, arr2-deterministic,
 * minnesota, rhs, gaussian.
 */
priors::PriorSpec prior_from_name(const std::string& name);

/// Model spec from family/p/q/g/prior and the prior hyperparameter keys.
models::ModelSpec model_spec_from(const Config& c);
inference::SamplerConfig sampler_from(const Config& c);

/// One simulate-fit-score unit of an experiment grid.
struct CellSpec {
    std::string dgp;  ///< minnesota | oscillation | delayed | arx | ltx
    int p = 9;        ///< AR order (ignored for ltx)
    int m = 0;        ///< covariates (arx, ltx)
    double rho = 0.0;
    double state_scale = 1.0;
    std::string prior = "arr2";
    int rep = 0;
};

struct ExperimentSettings {
    std::uint64_t seed = 1;
    int T = 0;                ///< 0: family default (120, or 200 for ltx)
    int ltx_lags = 4;
    bool xi_adjust = false;   ///< rescale exogenous concentrations by 1/(1+4 rho)
    inference::SamplerConfig sampler;
    bool lfo = true;
    int lfo_start = 0;        ///< 0: T/2
    int lfo_stride = 10;
    inference::SamplerConfig lfo_sampler;
};

struct CellResult {
    CellSpec cell;
    int T = 0;
    std::uint64_t data_seed = 0;
    std::uint64_t fit_seed = 0;
    bool ok = false;
    std::string error;
    double rmse_phi = 0.0;
    double rmse_beta = 0.0;
    double rmse_state = 0.0;
    double rmse_sigma_delta = 0.0;
    double sigma_delta_mean = 0.0;
    double mlpd = 0.0;
    int lfo_excluded = 0;
    double r2_mean = 0.0;
    double trend_share = 0.0;
    double trend_fraction = 0.0;
    double max_rhat = 0.0;
    int divergences = 0;
};

/// Seeds: data depends on (dgp, m, rho, state scale, rep) only, so every p and prior sees the same series.
std::uint64_t cell_data_seed(std::uint64_t master, const CellSpec& c);
std::uint64_t cell_fit_seed(std::uint64_t master, const CellSpec& c);

dgp::Simulation simulate_cell(const CellSpec& c, const ExperimentSettings& s);
models::ModelSpec cell_model_spec(const CellSpec& c, const ExperimentSettings& s);
/// Never throws: failures come back with ok = false and the message.
CellResult run_cell(const CellSpec& c, const ExperimentSettings& s);

/// Defaults for each subcommand; every key is also a --flag.
Config defaults_for(const std::string& command);

int cmd_fit(const Config& c);
int cmd_simulate(const Config& c);
int cmd_experiment(const Config& c);
int cmd_prior_check(const Config& c);
int cmd_diagnose(const Config& c);

/// Parses argv and dispatches. Exit codes: 0 ok, 1 internal error, 2 user error, 3 not converged.
int run(int argc, char** argv);

}  // namespace arr2::cli
