#include "arr2/diagnostics.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace arr2::inference {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check(const Chains& chains, std::size_t min_len) {
    if (chains.empty()) throw std::invalid_argument("diagnostics: no chains");
    const std::size_t n = chains.front().size();
    for (const auto& c : chains) {
        if (c.size() != n) throw std::invalid_argument("diagnostics: chains differ in length");
    }
    if (n < min_len) throw std::invalid_argument("diagnostics: chains too short");
}

double mean(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double var(std::span<const double> v) {
    const double m = mean(v);
    double s = 0.0;
    for (double a : v) s += (a - m) * (a - m);
    return s / static_cast<double>(v.size() - 1);
}

/// Biased autocovariance at lag t of a centred copy.
double acov(const std::vector<double>& centred, std::size_t t) {
    const std::size_t n = centred.size();
    double s = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) s += centred[i] * centred[i + t];
    return s / static_cast<double>(n);
}

Chains fold(const Chains& chains) {
    std::vector<double> all;
    for (const auto& c : chains) all.insert(all.end(), c.begin(), c.end());
    const double med = quantile(all, 0.5);
    Chains out = chains;
    for (auto& c : out) {
        for (double& v : c) v = std::abs(v - med);
    }
    return out;
}

Chains indicator(const Chains& chains, double cut) {
    Chains out = chains;
    for (auto& c : out) {
        for (double& v : c) v = v <= cut ? 1.0 : 0.0;
    }
    return out;
}

}  // namespace

double quantile(std::vector<double> v, double prob) {
    if (v.empty()) throw std::invalid_argument("quantile: empty input");
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Chains split_chains(const Chains& chains) {
    Chains out;
    for (const auto& c : chains) {
        const std::size_t half = c.size() / 2;
        out.emplace_back(c.begin(), c.begin() + half);
        out.emplace_back(c.end() - half, c.end());
    }
    return out;
}

Chains rank_normalize(const Chains& chains) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < chains.size(); ++j) {
        for (std::size_t i = 0; i < chains[j].size(); ++i) all.emplace_back(chains[j][i], j * chains[j].size() + i);
    }
    std::sort(all.begin(), all.end());
    const double S = static_cast<double>(all.size());
    std::vector<double> z(all.size());
    const boost::math::normal_distribution<double> nd;
    for (std::size_t a = 0; a < all.size();) {
        std::size_t b = a;
        while (b + 1 < all.size() && all[b + 1].first == all[a].first) ++b;
        const double rank = 0.5 * static_cast<double>(a + b) + 1.0;
        const double zz = boost::math::quantile(nd, (rank - 0.375) / (S + 0.25));
        for (std::size_t k = a; k <= b; ++k) z[all[k].second] = zz;
        a = b + 1;
    }
    Chains out = chains;
    for (std::size_t j = 0; j < chains.size(); ++j) {
        for (std::size_t i = 0; i < chains[j].size(); ++i) out[j][i] = z[j * chains[j].size() + i];
    }
    return out;
}

double rhat_basic(const Chains& chains) {
    check(chains, 2);
    const std::size_t m = chains.size();
    const double n = static_cast<double>(chains.front().size());
    std::vector<double> means(m), vars(m);
    for (std::size_t j = 0; j < m; ++j) {
        means[j] = mean(chains[j]);
        vars[j] = var(chains[j]);
    }
    const double W = mean(vars);
    if (!(W > 0.0)) return kNaN;
    const double B = m > 1 ? n * var(means) : 0.0;
    const double var_hat = (n - 1.0) / n * W + B / n;
    return std::sqrt(var_hat / W);
}

double split_rhat(const Chains& chains) {
    check(chains, 4);
    const Chains split = split_chains(chains);
    for (const auto& c : split) {
        if (std::all_of(c.begin(), c.end(), [&](double v) { return v == c.front(); })) return kNaN;
    }
    const double bulk = rhat_basic(rank_normalize(split));
    const double tail = rhat_basic(rank_normalize(fold(split)));
    if (std::isnan(bulk) || std::isnan(tail)) return kNaN;
    return std::max(bulk, tail);
}

double ess_basic(const Chains& chains) {
    check(chains, 2);
    const std::size_t m = chains.size();
    const std::size_t n = chains.front().size();
    if (n < 4) return kNaN;
    std::vector<std::vector<double>> centred(m);
    std::vector<double> means(m), acov0(m);
    for (std::size_t j = 0; j < m; ++j) {
        means[j] = mean(chains[j]);
        centred[j].resize(n);
        for (std::size_t i = 0; i < n; ++i) centred[j][i] = chains[j][i] - means[j];
        acov0[j] = acov(centred[j], 0);
    }
    const double nd = static_cast<double>(n);
    double mean_var = 0.0;
    for (double a : acov0) mean_var += a * nd / (nd - 1.0);
    mean_var /= static_cast<double>(m);
    double var_plus = mean_var * (nd - 1.0) / nd;
    if (m > 1) var_plus += var(means);
    if (!(var_plus > 0.0)) return kNaN;

    auto mean_acov = [&](std::size_t t) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += acov(centred[j], t);
        return s / static_cast<double>(m);
    };
    std::vector<double> rho(n, 0.0);
    double rho_even = 1.0;
    rho[0] = 1.0;
    double rho_odd = 1.0 - (mean_var - mean_acov(1)) / var_plus;
    rho[1] = rho_odd;
    std::size_t t = 1;
    while (t + 5 < n && !std::isnan(rho_even + rho_odd) && rho_even + rho_odd > 0.0) {
        rho_even = 1.0 - (mean_var - mean_acov(t + 1)) / var_plus;
        rho_odd = 1.0 - (mean_var - mean_acov(t + 2)) / var_plus;
        if (rho_even + rho_odd >= 0.0) {
            rho[t + 1] = rho_even;
            rho[t + 2] = rho_odd;
        }
        t += 2;
    }
    const std::size_t max_t = t;
    if (rho_even > 0.0) rho[max_t + 1] = rho_even;
    for (std::size_t k = 1; k + 4 <= max_t; k += 2) {
        if (rho[k + 1] + rho[k + 2] > rho[k - 1] + rho[k]) {
            rho[k + 1] = (rho[k - 1] + rho[k]) / 2.0;
            rho[k + 2] = rho[k + 1];
        }
    }
    const double total = static_cast<double>(m * n);
    double tau = -1.0 + rho[max_t + 1];
    for (std::size_t k = 0; k < max_t; ++k) tau += 2.0 * rho[k];
    return std::min(total / tau, total * std::log10(total));
}

double ess_bulk(const Chains& chains) {
    check(chains, 4);
    return ess_basic(rank_normalize(split_chains(chains)));
}

double ess_tail(const Chains& chains) {
    check(chains, 4);
    std::vector<double> all;
    for (const auto& c : chains) all.insert(all.end(), c.begin(), c.end());
    const double q05 = quantile(all, 0.05);
    const double q95 = quantile(all, 0.95);
    const Chains split = split_chains(chains);
    const double lo = ess_basic(indicator(split, q05));
    const double hi = ess_basic(indicator(split, q95));
    if (std::isnan(lo) || std::isnan(hi)) return kNaN;
    return std::min(lo, hi);
}

}  // namespace arr2::inference
