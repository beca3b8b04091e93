#include "arr2/dgp.hpp"

#include <cmath>
#include <stdexcept>

#include "arr2/tsmath.hpp"

namespace arr2::dgp {

using dist::sample_normal;

namespace {

void require_stationary(const std::vector<double>& phi) {
    const auto rep = ts::stationarity(phi);
    if (!rep.is_stationary) {
        throw std::domain_error("AR coefficients are not stationary (max inverse root modulus " +
                                std::to_string(rep.max_inverse_modulus) + ")");
    }
}

void check_blocks(int m, int block, double rho) {
    if (block < 1) throw std::invalid_argument("block size must be positive");
    if (m < 1 || m % block != 0) {
        throw std::invalid_argument("m = " + std::to_string(m) + " is not a positive multiple of the block size " +
                                    std::to_string(block));
    }
    // Equicorrelation blocks are positive definite for -1/(b-1) < rho < 1.
    if (!(rho < 1.0) || (block > 1 && !(rho > -1.0 / (block - 1)))) {
        throw std::invalid_argument("rho = " + std::to_string(rho) + " does not give a positive definite block");
    }
}

/// Draws n rows of N(0, Sigma) given the lower Cholesky factor.
Eigen::MatrixXd mvn_rows(int n, const Eigen::MatrixXd& L, Rng& rng) {
    Eigen::MatrixXd z(n, L.rows());
    for (int t = 0; t < n; ++t) {
        for (Eigen::Index j = 0; j < L.rows(); ++j) z(t, j) = sample_normal(0.0, 1.0, rng);
    }
    return z * L.transpose();
}

}  // namespace

std::vector<double> minnesota_phi() { return {0.6, 0.15, 0.067, 0.038, 0.024, 0.017, 0.012, 0.009}; }
std::vector<double> oscillation_phi() { return {-0.509, 0.582, -0.069, -0.309, 0.242, 0.031, -0.166, 0.089}; }
std::vector<double> delayed_phi() { return {0.0, 0.0, 0.0, 0.0, 0.7, 0.2, 0.05, 0.025}; }

std::vector<double> ar_phi_by_name(const std::string& name) {
    if (name == "minnesota") return minnesota_phi();
    if (name == "oscillation") return oscillation_phi();
    if (name == "delayed") return delayed_phi();
    throw std::invalid_argument("unknown AR dgp '" + name + "' (expected minnesota, oscillation or delayed)");
}

Eigen::MatrixXd block_covariance(int m, double rho, int block) {
    check_blocks(m, block, rho);
    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(m, m);
    for (int b = 0; b < m; b += block) {
        for (int i = b; i < b + block; ++i) {
            for (int j = b; j < b + block; ++j) {
                if (i != j) S(i, j) = rho;
            }
        }
    }
    return S;
}

std::vector<double> block_beta(int m, double varrho, int block) {
    if (block < 1 || m < 1) throw std::invalid_argument("block_beta: sizes must be positive");
    std::vector<double> beta(m, 0.0);
    const double scale[3] = {1.0, 0.5, 0.25};
    for (int i = 0; i < m && i < 3 * block; ++i) beta[i] = varrho * scale[i / block];
    return beta;
}

Simulation simulate_ar(const ArDgp& dgp, Rng& rng) {
    require_stationary(dgp.phi);
    if (dgp.T < 1) throw std::invalid_argument("T must be positive");
    if (dgp.sigma2 < 0.0) throw std::invalid_argument("sigma2 must be nonnegative");
    if (dgp.burn_in < 0) throw std::invalid_argument("burn_in must be nonnegative");
    const int p = static_cast<int>(dgp.phi.size());
    const double sd = std::sqrt(dgp.sigma2);
    const int burn = dgp.y0 ? 0 : dgp.burn_in;
    const int n = burn + dgp.T;
    std::vector<double> y(n, 0.0);
    for (int t = 0; t < n; ++t) {
        if (t == 0 && dgp.y0) {
            y[0] = *dgp.y0;
            continue;
        }
        double mu = 0.0;
        for (int i = 1; i <= p && t - i >= 0; ++i) mu += dgp.phi[i - 1] * y[t - i];
        y[t] = mu + (sd > 0.0 ? sample_normal(0.0, sd, rng) : 0.0);
    }
    Simulation s;
    s.data = TimeSeriesData(std::vector<double>(y.begin() + burn, y.end()));
    s.phi = dgp.phi;
    s.sigma = sd;
    return s;
}

Simulation simulate_arx(const ArxDgp& dgp, Rng& rng) {
    require_stationary(dgp.phi);
    if (dgp.T < 1 || dgp.burn_in < 0) throw std::invalid_argument("T must be positive and burn_in nonnegative");
    const Eigen::MatrixXd S = block_covariance(dgp.m, dgp.rho, dgp.block);
    const Eigen::MatrixXd L = S.llt().matrixL();
    const std::vector<double> beta = block_beta(dgp.m, dgp.varrho, dgp.block);
    const Eigen::Map<const Eigen::VectorXd> b(beta.data(), dgp.m);
    const int n = dgp.burn_in + dgp.T;
    const Eigen::MatrixXd X = mvn_rows(n, L, rng);
    const int p = static_cast<int>(dgp.phi.size());
    const double sd = std::sqrt(dgp.sigma2);
    std::vector<double> y(n, 0.0);
    for (int t = 0; t < n; ++t) {
        double mu = X.row(t).dot(b);
        for (int i = 1; i <= p && t - i >= 0; ++i) mu += dgp.phi[i - 1] * y[t - i];
        y[t] = mu + sample_normal(0.0, sd, rng);
    }
    Simulation s;
    s.data = TimeSeriesData(std::vector<double>(y.begin() + dgp.burn_in, y.end()), X.bottomRows(dgp.T));
    s.phi = dgp.phi;
    s.beta = beta;
    s.sigma = sd;
    return s;
}

Simulation simulate_ltx(const LtxDgp& dgp, Rng& rng) {
    if (!(std::abs(dgp.phi_state) < 1.0)) throw std::invalid_argument("state AR coefficient must satisfy |phi| < 1");
    if (dgp.lags < 1 || dgp.T < 1) throw std::invalid_argument("ltx: lags and T must be positive");
    if (dgp.sigma_delta < 0.0 || dgp.sigma2 < 0.0) throw std::invalid_argument("ltx: scales must be nonnegative");
    const Eigen::MatrixXd S = block_covariance(dgp.m, dgp.rho, dgp.block);
    const Eigen::MatrixXd L = S.llt().matrixL();
    const std::vector<double> base = block_beta(dgp.m, dgp.varrho, dgp.block);
    const int g = dgp.lags;
    std::vector<double> beta(static_cast<std::size_t>(dgp.m) * g);
    for (int i = 0; i < dgp.m; ++i) {
        for (int j = 1; j <= g; ++j) beta[i * g + j - 1] = base[i] / (j * j);
    }
    // Raw covariates for t = -(g-1) .. T-1, then lagged columns.
    const Eigen::MatrixXd raw = mvn_rows(dgp.T + g - 1, L, rng);
    Eigen::MatrixXd X(dgp.T, dgp.m * g);
    for (int t = 0; t < dgp.T; ++t) {
        for (int i = 0; i < dgp.m; ++i) {
            for (int j = 1; j <= g; ++j) X(t, i * g + j - 1) = raw(t + g - j, i);
        }
    }
    const double phi = dgp.phi_state;
    std::vector<double> delta(dgp.T);
    double prev = 0.0;
    for (int t = 0; t < dgp.T; ++t) {
        if (t == 0) {
            if (dgp.delta0) {
                delta[0] = *dgp.delta0;
            } else {
                const double sd0 = dgp.sigma_delta / std::sqrt(1.0 - phi * phi);
                delta[0] = sd0 > 0.0 ? sample_normal(0.0, sd0, rng) : 0.0;
            }
        } else {
            delta[t] = phi * prev + (dgp.sigma_delta > 0.0 ? sample_normal(0.0, dgp.sigma_delta, rng) : 0.0);
        }
        prev = delta[t];
    }
    const Eigen::Map<const Eigen::VectorXd> b(beta.data(), static_cast<Eigen::Index>(beta.size()));
    const double sd = std::sqrt(dgp.sigma2);
    std::vector<double> y(dgp.T);
    for (int t = 0; t < dgp.T; ++t) {
        y[t] = X.row(t).dot(b) + delta[t] + (sd > 0.0 ? sample_normal(0.0, sd, rng) : 0.0);
    }
    Simulation s;
    s.data = TimeSeriesData(std::move(y), std::move(X));
    s.beta = std::move(beta);
    s.delta = std::move(delta);
    s.sigma = sd;
    s.sigma_delta = dgp.sigma_delta;
    s.phi_state = phi;
    return s;
}

}  // namespace arr2::dgp
