#include "arr2/data.hpp"

#include <stdexcept>

#include "arr2/tsmath.hpp"

namespace arr2 {

TimeSeriesData::TimeSeriesData(std::vector<double> y_, Eigen::MatrixXd x_) : y(std::move(y_)), x(std::move(x_)) {
    if (x.rows() != static_cast<Eigen::Index>(y.size())) {
        throw std::invalid_argument("covariate matrix has " + std::to_string(x.rows()) + " rows, series has " +
                                    std::to_string(y.size()));
    }
    for (Eigen::Index j = 0; j < x.cols(); ++j) x_names.push_back("x" + std::to_string(j + 1));
}

TimeSeriesData TimeSeriesData::head(int n) const {
    if (n < 0 || n > T()) throw std::invalid_argument("head: length out of range");
    TimeSeriesData out;
    out.y.assign(y.begin(), y.begin() + n);
    out.x = x.topRows(n);
    out.x_names = x_names;
    return out;
}

DataStats compute_stats(const TimeSeriesData& data) {
    DataStats s;
    s.var_y = ts::sample_variance(data.y);
    if (!(s.var_y > 0.0)) throw std::invalid_argument("target series is constant");
    for (Eigen::Index j = 0; j < data.x.cols(); ++j) {
        const Eigen::VectorXd col = data.x.col(j);
        const double v = ts::sample_variance({col.data(), static_cast<std::size_t>(col.size())});
        if (!(v > 0.0)) {
            throw std::invalid_argument("covariate column " + std::to_string(j + 1) + " is constant");
        }
        s.var_x.push_back(v);
    }
    return s;
}

}  // namespace arr2
