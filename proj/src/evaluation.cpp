#include "arr2/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "arr2/tsmath.hpp"

namespace arr2::eval {

double rmse(std::span<const double> estimate, std::span<const double> truth) {
    if (estimate.size() != truth.size()) {
        throw std::invalid_argument("rmse: lengths differ (" + std::to_string(estimate.size()) + " vs " +
                                    std::to_string(truth.size()) + ")");
    }
    if (estimate.empty()) throw std::invalid_argument("rmse: empty input");
    double s = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) s += (estimate[k] - truth[k]) * (estimate[k] - truth[k]);
    return std::sqrt(s / static_cast<double>(truth.size()));
}

namespace {

void check_lfo(const TimeSeriesData& data, int L, int M) {
    if (M < 1) throw std::invalid_argument("lfo: horizon M must be >= 1");
    if (L < 1 || L > data.T() - M) {
        throw std::invalid_argument("lfo: need 1 <= L <= T - M (L = " + std::to_string(L) +
                                    ", T = " + std::to_string(data.T()) + ", M = " + std::to_string(M) + ")");
    }
}

double score(const FoldPosterior& post, const TimeSeriesData& data, int i, int M) {
    return models::posterior_predictive_logdensity(post.model, post.draws, data, i, M);
}

void finish(LfoResult& r) {
    for (const auto& f : r.folds) {
        if (f.ok) {
            r.total += f.score;
            ++r.n_scored;
        } else {
            ++r.n_excluded;
        }
    }
}

}  // namespace

LfoResult elpd_lfo(const models::ModelSpec& spec, const TimeSeriesData& data, const LfoConfig& cfg,
                   const Fitter& fitter) {
    check_lfo(data, cfg.L, cfg.M);
    if (cfg.stride < 1) throw std::invalid_argument("lfo: stride must be >= 1");
    LfoResult r;
    std::optional<FoldPosterior> post;
    auto refit = [&](int n) {
        try {
            post = fitter(spec, data.head(n));
        } catch (const std::exception&) {
            post.reset();
        }
    };
    if (cfg.mode == LfoMode::Fixed) refit(cfg.L);
    for (int i = cfg.L, k = 0; i <= data.T() - cfg.M; ++i, ++k) {
        if (cfg.mode == LfoMode::Refit && k % cfg.stride == 0) refit(i);
        LfoFold f;
        f.i = i;
        if (post) {
            try {
                f.score = score(*post, data, i, cfg.M);
                f.ok = std::isfinite(f.score);
            } catch (const std::exception&) {
                f.ok = false;
            }
        } else {
            f.ok = false;
        }
        r.folds.push_back(f);
    }
    finish(r);
    return r;
}

LfoResult elpd_lfo_frozen(const FoldPosterior& post, const TimeSeriesData& data, int L, int M) {
    check_lfo(data, L, M);
    LfoResult r;
    for (int i = L; i <= data.T() - M; ++i) {
        LfoFold f;
        f.i = i;
        f.score = score(post, data, i, M);
        f.ok = std::isfinite(f.score);
        r.folds.push_back(f);
    }
    finish(r);
    return r;
}

R2Decomposition r2_decomposition(const models::Model& model, const std::vector<std::vector<double>>& draws) {
    if (draws.empty()) throw std::invalid_argument("r2_decomposition: no draws");
    const int K = model.n_components();
    const int S = static_cast<int>(draws.size());
    R2Decomposition out;
    out.components = model.component_names();
    out.share.resize(S, K);
    out.fraction.resize(S, K);
    out.of_var_y.resize(S, K);
    out.bayes_r2.resize(S);
    const auto yw = model.window_y();
    const double var_y = ts::sample_variance(yw);
    if (!(var_y > 0.0)) throw std::domain_error("r2_decomposition: target has zero variance");
    for (int s = 0; s < S; ++s) {
        const auto series = model.component_series(draws[s]);
        std::vector<double> v(K);
        double total = 0.0;
        for (int k = 0; k < K; ++k) {
            v[k] = ts::sample_variance(series[k]);
            total += v[k];
        }
        const double r2 = model.bayes_r2(draws[s]);
        out.bayes_r2[s] = r2;
        for (int k = 0; k < K; ++k) {
            const double frac = total > 0.0 ? v[k] / total : 0.0;
            out.fraction(s, k) = frac;
            out.share(s, k) = frac * r2;
            out.of_var_y(s, k) = v[k] / var_y;
        }
    }
    return out;
}

std::vector<double> relative_r2_conditional(std::span<const double> phi, double sigma2) {
    const std::vector<double> gamma = ts::yule_walker(phi, sigma2, 0);
    const double g0 = gamma[0];
    std::vector<double> out(phi.size());
    // var(phi_i y_{t-i}) = phi_i^2 gamma(0) under stationarity.
    for (std::size_t i = 0; i < phi.size(); ++i) out[i] = phi[i] * phi[i] * g0 / g0;
    return out;
}

Summary summarize(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("summarize: no values");
    Summary s;
    s.n = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / s.n;
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.se = std::sqrt(ss / (s.n - 1)) / std::sqrt(static_cast<double>(s.n));
    }
    return s;
}

std::vector<Summary> aggregate(const std::vector<Record>& records) {
    std::vector<std::vector<std::string>> order;
    std::map<std::vector<std::string>, std::vector<double>> groups;
    for (const auto& r : records) {
        auto [it, fresh] = groups.try_emplace(r.key);
        if (fresh) order.push_back(r.key);
        if (std::isfinite(r.value)) it->second.push_back(r.value);
    }
    std::vector<Summary> out;
    for (const auto& key : order) {
        const auto& vals = groups[key];
        Summary s;
        if (!vals.empty()) s = summarize(vals);
        else s.mean = s.se = std::numeric_limits<double>::quiet_NaN();
        s.key = key;
        out.push_back(s);
    }
    return out;
}

Pushforward prior_pushforward(const models::Model& model, int draws, Rng& rng) {
    if (draws < 1) throw std::invalid_argument("prior_pushforward: draws must be >= 1");
    Pushforward out;
    const int K = model.n_components();
    out.components = model.component_names();
    out.contribution.resize(draws, K);
    out.r2.resize(draws);
    const int p = model.n_phi();
    const int phi_off = model.offsets().phi;
    int nonstat = 0;
    for (int s = 0; s < draws; ++s) {
        const std::vector<double> x = model.sample_prior(rng);
        const std::vector<double> v = model.prior_signal_variances(x);
        double total = 0.0;
        for (double a : v) total += a;
        const double sigma2 = x[model.offsets().sigma] * x[model.offsets().sigma];
        const double denom = total + sigma2;
        out.r2[s] = total / denom;
        for (int k = 0; k < K; ++k) out.contribution(s, k) = v[k] / denom;
        if (p > 0) {
            const auto rep = ts::stationarity(std::span<const double>(x).subspan(phi_off, p));
            out.max_root_modulus.push_back(rep.max_inverse_modulus);
            if (!rep.is_stationary) ++nonstat;
        }
    }
    out.nonstationary_fraction = p > 0 ? static_cast<double>(nonstat) / draws : 0.0;
    return out;
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t k = 0; k < sample.size(); ++k) {
        const double F = cdf(sample[k]);
        d = std::max({d, F - k / n, (k + 1) / n - F});
    }
    return d;
}

}  // namespace arr2::eval
