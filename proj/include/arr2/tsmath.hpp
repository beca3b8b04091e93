#pragma once

#include <complex>
#include <span>
#include <vector>

namespace arr2::ts {

/**
 * @brief Characteristic-root summary of an AR polynomial 1 - phi_1 u - ... - phi_p u^p.
 *
 * Roots come from the companion-matrix eigenvalues (the inverse roots).
 * Zero eigenvalues carry no root and are dropped, so an all-zero phi gives an
 * empty root list and counts as stationary.
 */
struct StationarityReport {
    std::vector<std::complex<double>> roots;   ///< roots u of the polynomial
    std::vector<double> root_moduli;           ///< |u|
    double max_inverse_modulus = 0.0;          ///< max |1/u|
    bool is_stationary = true;
    std::vector<double> periods;               ///< 2 pi / Arg for complex roots, one per conjugate pair
};

/// |1/u| within this distance of 1 counts as a unit root.
inline constexpr double kUnitRootTol = 1e-10;

StationarityReport stationarity(std::span<const double> phi);

/// Largest companion eigenvalue modulus (0 for empty phi).
double max_inverse_root_modulus(std::span<const double> phi);

/**
 * @brief Autocovariances gamma(0..K) of a stationary AR(p) with innovation variance sigma2.
 *
 * Throws std::domain_error for non-stationary phi.
 */
std::vector<double> yule_walker(std::span<const double> phi, double sigma2, int K);

/// Solves the Toeplitz system Gamma phi = gamma(1..p) for the AR(p) coefficients.
std::vector<double> yule_walker_estimate(std::span<const double> gamma, int p);

/// Durbin-Levinson partial autocorrelations at lags 1..K, K = gamma.size() - 1.
std::vector<double> partial_autocorrelations(std::span<const double> gamma);

/// Unbiased sample variance. Throws std::invalid_argument for fewer than 2 points.
double sample_variance(std::span<const double> y);
double sample_mean(std::span<const double> y);

/// Mean-centred sample autocovariances with divisor n, lags 0..K.
std::vector<double> sample_autocovariance(std::span<const double> y, int K);

}  // namespace arr2::ts
