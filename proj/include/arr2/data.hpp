#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace arr2 {

/**
 * @brief Target series with an optional covariate matrix (T x m).
 *
 * Row t of x holds the covariates observed alongside y[t].
 */
struct TimeSeriesData {
    std::vector<double> y;
    Eigen::MatrixXd x;
    std::vector<std::string> x_names;

    TimeSeriesData() = default;
    explicit TimeSeriesData(std::vector<double> y_) : y(std::move(y_)), x(y.size(), 0) {}
    TimeSeriesData(std::vector<double> y_, Eigen::MatrixXd x_);

    [[nodiscard]] int T() const noexcept { return static_cast<int>(y.size()); }
    [[nodiscard]] int m() const noexcept { return static_cast<int>(x.cols()); }

    /// First n observations (rows) only.
    [[nodiscard]] TimeSeriesData head(int n) const;
};

/**
 * @brief Data-based variance plug-ins used by the priors.
 */
struct DataStats {
    double var_y = 1.0;
    std::vector<double> var_x;
};

/// Sample variances of y and every covariate column. Throws on constant columns.
DataStats compute_stats(const TimeSeriesData& data);

}  // namespace arr2
