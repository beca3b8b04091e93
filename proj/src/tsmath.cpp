#include "arr2/tsmath.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace arr2::ts {

namespace {

Eigen::VectorXcd companion_eigenvalues(std::span<const double> phi) {
    const auto p = static_cast<Eigen::Index>(phi.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) c(0, i) = phi[i];
    for (Eigen::Index i = 1; i < p; ++i) c(i, i - 1) = 1.0;
    if (p == 1) {
        Eigen::VectorXcd v(1);
        v(0) = phi[0];
        return v;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
    return es.eigenvalues();
}

}  // namespace

StationarityReport stationarity(std::span<const double> phi) {
    StationarityReport r;
    if (phi.empty()) return r;
    const Eigen::VectorXcd ev = companion_eigenvalues(phi);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const std::complex<double> lam = ev(i);
        const double mod = std::abs(lam);
        r.max_inverse_modulus = std::max(r.max_inverse_modulus, mod);
        if (mod == 0.0) continue;
        const std::complex<double> u = 1.0 / lam;
        r.roots.push_back(u);
        r.root_moduli.push_back(std::abs(u));
        if (lam.imag() > 0.0) r.periods.push_back(2.0 * std::numbers::pi / std::arg(lam));
    }
    r.is_stationary = r.max_inverse_modulus < 1.0 - kUnitRootTol;
    return r;
}

double max_inverse_root_modulus(std::span<const double> phi) {
    if (phi.empty()) return 0.0;
    return companion_eigenvalues(phi).cwiseAbs().maxCoeff();
}

std::vector<double> yule_walker(std::span<const double> phi, double sigma2, int K) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("yule_walker: sigma2 must be positive");
    if (K < 0) throw std::invalid_argument("yule_walker: K must be nonnegative");
    const double m = max_inverse_root_modulus(phi);
    if (!(m < 1.0 - kUnitRootTol)) {
        throw std::domain_error("yule_walker: non-stationary coefficients, inverse root modulus " +
                                std::to_string(m));
    }
    const int p = static_cast<int>(phi.size());
    // gamma(h) - sum_i phi_i gamma(|h - i|) = sigma2 [h == 0], h = 0..p
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p + 1, p + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(p + 1);
    b(0) = sigma2;
    for (int h = 0; h <= p; ++h) {
        for (int i = 1; i <= p; ++i) a(h, std::abs(h - i)) -= phi[i - 1];
    }
    const Eigen::VectorXd g = a.partialPivLu().solve(b);
    std::vector<double> gamma(std::max(K, p) + 1);
    for (int h = 0; h <= p; ++h) gamma[h] = g(h);
    for (int h = p + 1; h <= std::max(K, p); ++h) {
        double s = 0.0;
        for (int i = 1; i <= p; ++i) s += phi[i - 1] * gamma[h - i];
        gamma[h] = s;
    }
    gamma.resize(K + 1);
    return gamma;
}

std::vector<double> yule_walker_estimate(std::span<const double> gamma, int p) {
    if (p < 1 || static_cast<int>(gamma.size()) < p + 1) {
        throw std::invalid_argument("yule_walker_estimate: need gamma(0..p)");
    }
    Eigen::MatrixXd g(p, p);
    Eigen::VectorXd rhs(p);
    for (int i = 0; i < p; ++i) {
        rhs(i) = gamma[i + 1];
        for (int j = 0; j < p; ++j) g(i, j) = gamma[std::abs(i - j)];
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0) {
        throw std::domain_error("yule_walker_estimate: autocovariance matrix is not positive definite");
    }
    const Eigen::VectorXd phi = ldlt.solve(rhs);
    return {phi.data(), phi.data() + p};
}

std::vector<double> partial_autocorrelations(std::span<const double> gamma) {
    if (gamma.empty() || !(gamma[0] > 0.0)) {
        throw std::invalid_argument("partial_autocorrelations: gamma(0) must be positive");
    }
    const int K = static_cast<int>(gamma.size()) - 1;
    std::vector<double> pacf(K);
    std::vector<double> a;
    std::vector<double> prev;
    double v = gamma[0];
    for (int k = 1; k <= K; ++k) {
        if (v <= gamma[0] * 1e-14) {
            throw std::domain_error("partial_autocorrelations: singular Toeplitz system at lag " +
                                    std::to_string(k));
        }
        double num = gamma[k];
        for (int j = 1; j < k; ++j) num -= a[j - 1] * gamma[k - j];
        const double kappa = num / v;
        prev = a;
        a.resize(k);
        a[k - 1] = kappa;
        for (int j = 1; j < k; ++j) a[j - 1] = prev[j - 1] - kappa * prev[k - j - 1];
        v *= (1.0 - kappa * kappa);
        pacf[k - 1] = kappa;
    }
    return pacf;
}

double sample_mean(std::span<const double> y) {
    if (y.empty()) throw std::invalid_argument("sample_mean: empty series");
    double s = 0.0;
    for (double v : y) s += v;
    return s / static_cast<double>(y.size());
}

double sample_variance(std::span<const double> y) {
    if (y.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 points");
    const double m = sample_mean(y);
    double s = 0.0;
    for (double v : y) s += (v - m) * (v - m);
    return s / static_cast<double>(y.size() - 1);
}

std::vector<double> sample_autocovariance(std::span<const double> y, int K) {
    const std::size_t n = y.size();
    if (n < 2 || K < 0 || static_cast<std::size_t>(K) >= n) {
        throw std::invalid_argument("sample_autocovariance: need K < n and n >= 2");
    }
    const double m = sample_mean(y);
    std::vector<double> c(n);
    for (std::size_t t = 0; t < n; ++t) c[t] = y[t] - m;
    std::vector<double> out(K + 1);
    for (int k = 0; k <= K; ++k) {
        double s = 0.0;
        for (std::size_t t = k; t < n; ++t) s += c[t] * c[t - k];
        out[k] = s / static_cast<double>(n);
    }
    return out;
}

}  // namespace arr2::ts
