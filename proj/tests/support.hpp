#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace testing {

/// Central difference with one Richardson step; error O(h^4).
inline double fd_derivative(const std::function<double(double)>& f, double x) {
    const double h = 1e-3 * std::max(1.0, std::abs(x));
    const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       const std::vector<double>& x) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        g[i] = fd_derivative(
            [&](double v) {
                std::vector<double> y = x;
                y[i] = v;
                return f(y);
            },
            x[i]);
    }
    return g;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

/// Kolmogorov-Smirnov distance between a sample and a cdf.
inline double ks(std::vector<double> s, const std::function<double(double)>& cdf) {
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double F = cdf(s[i]);
        d = std::max({d, std::abs(F - i / n), std::abs((i + 1) / n - F)});
    }
    return d;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double a : v) s += a;
    return s / static_cast<double>(v.size());
}

inline double var(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double a : v) s += (a - m) * (a - m);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace testing
