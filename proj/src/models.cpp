#include "arr2/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "arr2/tsmath.hpp"

namespace arr2::models {

using inference::TransformKind;
using priors::PriorKind;

std::string to_string(Family f) {
    switch (f) {
        case Family::AR: return "ar";
        case Family::ARX: return "arx";
        case Family::MA: return "ma";
        case Family::ARMA: return "arma";
        case Family::ARDL: return "ardl";
        case Family::LTX: return "ltx";
    }
    return "?";
}

Family family_from_string(const std::string& s) {
    if (s == "ar") return Family::AR;
    if (s == "arx") return Family::ARX;
    if (s == "ma") return Family::MA;
    if (s == "arma") return Family::ARMA;
    if (s == "ardl") return Family::ARDL;
    if (s == "ltx") return Family::LTX;
    throw std::invalid_argument("unknown model family '" + s + "' (expected ar, arx, ma, arma, ardl or ltx)");
}

namespace {

bool uses_covariates(Family f) { return f == Family::ARX || f == Family::ARDL || f == Family::LTX; }

double minnesota_xi(int order, int lag) {
    return static_cast<double>(order) * order / 10.0 / (static_cast<double>(lag) * lag);
}

}  // namespace

Model::Model(ModelSpec spec, TimeSeriesData data) : spec_(std::move(spec)), data_(std::move(data)) {
    const ModelSpec& s = spec_;
    const int T = data_.T();
    const int m = data_.m();
    if (s.p < 0 || s.q < 0) throw std::invalid_argument("model orders must be nonnegative");
    if (s.g < 1) throw std::invalid_argument("covariate lag count g must be >= 1");
    if (uses_covariates(s.family) && m < 1) {
        throw std::invalid_argument(to_string(s.family) + " model needs covariate columns, data has none");
    }
    int groups = 0;
    int lags = 1;
    switch (s.family) {
        case Family::AR:
            n_phi_ = s.p;
            cond_ = s.p;
            break;
        case Family::ARX:
            n_phi_ = s.p;
            n_beta_ = m;
            groups = m;
            cond_ = s.p;
            break;
        case Family::MA:
            if (s.q < 1) throw std::invalid_argument("ma model needs q >= 1");
            n_ma_ = s.q;
            cond_ = s.q;
            break;
        case Family::ARMA:
            if (s.q < 1) throw std::invalid_argument("arma model needs q >= 1");
            n_phi_ = s.p;
            n_ma_ = s.q;
            cond_ = std::max(s.p, s.q);
            break;
        case Family::ARDL:
            n_phi_ = s.p;
            n_beta_ = m * s.g;
            groups = m;
            lags = s.g;
            cond_ = std::max(s.p, s.g);
            break;
        case Family::LTX:
            if (m % s.g != 0) {
                throw std::invalid_argument("ltx: " + std::to_string(m) + " covariate columns is not a multiple of g = " +
                                            std::to_string(s.g));
            }
            n_beta_ = m;
            groups = m / s.g;
            lags = s.g;
            cond_ = 0;
            break;
    }
    if (T - cond_ < 2) {
        throw std::invalid_argument("series of length " + std::to_string(T) + " is too short for conditioning on " +
                                    std::to_string(cond_) + " observations");
    }
    stats_ = uses_covariates(s.family) ? compute_stats(data_) : compute_stats(TimeSeriesData(data_.y));

    // Coefficient recipes and decomposition components.
    const auto& a2 = s.prior.arr2;
    const bool grouped = s.family != Family::ARX && a2.group_weights != priors::LagWeights::None;
    std::vector<double> xi_auto;
    std::vector<bool> exog;
    int comp = 0;
    for (int i = 1; i <= n_phi_; ++i) {
        coef_.push_back({comp++, 1.0, true, stats_.var_y, 1, 1.0, 1.0 / (static_cast<double>(i) * i)});
        comp_names_.push_back("phi." + std::to_string(i));
        xi_auto.push_back(minnesota_xi(n_phi_, i));
        exog.push_back(false);
    }
    for (int j = 1; j <= n_ma_; ++j) {
        coef_.push_back({comp++, 1.0, false, 1.0, 1, 1.0, 1.0 / (static_cast<double>(j) * j)});
        comp_names_.push_back("ma." + std::to_string(j));
        xi_auto.push_back(minnesota_xi(n_ma_, j));
        exog.push_back(false);
    }
    if (n_beta_ > 0) {
        const std::vector<double> w =
            grouped ? priors::deterministic_lag_weights(lags, a2.group_weights) : std::vector<double>(lags, 1.0);
        for (int l = 0; l < groups; ++l) {
            int group_comp = -1;
            if (grouped) {
                group_comp = comp++;
                comp_names_.push_back("x" + std::to_string(l + 1));
                xi_auto.push_back(0.1);
                exog.push_back(true);
            }
            for (int j = 1; j <= lags; ++j) {
                const int col = l * lags + j - 1;
                const double vref = s.family == Family::ARDL ? stats_.var_x[l] : stats_.var_x[col];
                priors::CoefPrior cp;
                cp.component = grouped ? group_comp : comp++;
                cp.weight = w[j - 1];
                cp.sigma_scaled = true;
                cp.var_ref = vref;
                cp.kappa = 2;
                cp.kappa_ratio = stats_.var_y / vref;
                cp.decay = 1.0 / (static_cast<double>(j) * j);
                coef_.push_back(cp);
                if (!grouped) {
                    comp_names_.push_back(lags == 1 ? "x" + std::to_string(l + 1)
                                                    : "x" + std::to_string(l + 1) + ".lag" + std::to_string(j));
                    xi_auto.push_back(lags == 1 ? 0.1 : minnesota_xi(lags, j));
                    exog.push_back(true);
                }
            }
        }
    }
    if (s.family == Family::LTX) {
        state_comp_ = comp++;
        comp_names_.push_back("trend");
        xi_auto.push_back(1.0);
        exog.push_back(false);
    }
    n_comp_ = comp;

    if (s.prior.kind == PriorKind::Arr2) {
        (void)dist::BetaMP(a2.mu_r2, a2.phi_r2);
        if (!a2.xi.empty()) {
            if (static_cast<int>(a2.xi.size()) != n_comp_) {
                throw std::invalid_argument("concentration vector has " + std::to_string(a2.xi.size()) +
                                            " entries, model has " + std::to_string(n_comp_) + " components");
            }
            xi_ = a2.xi;
        } else if (a2.scheme == "minnesota") {
            xi_ = xi_auto;
        } else if (a2.scheme == "flat") {
            xi_.assign(n_comp_, 1.0);
        } else if (a2.scheme == "sparse") {
            xi_.assign(n_comp_, 0.1);
        } else {
            throw std::invalid_argument("unknown concentration scheme '" + a2.scheme +
                                        "' (expected minnesota, flat or sparse)");
        }
        for (int k = 0; k < n_comp_; ++k) {
            if (exog[k]) xi_[k] *= a2.exog_xi_scale;
            if (!(xi_[k] > 0.0)) throw std::invalid_argument("concentrations must be positive");
        }
    }

    sigma_prior_ = s.prior.sigma_prior ? *s.prior.sigma_prior : dist::ScalarDist(dist::HalfNormal{std::sqrt(stats_.var_y)});
    dist::validate(sigma_prior_);
    if (!dist::is_positive(sigma_prior_)) throw std::invalid_argument("sigma prior must be on [0, inf)");

    // Parameter layout.
    auto add = [&](const char* name, TransformKind kind, int size, bool scalar = false, int first = 1) {
        const int b = map_.add(name, kind, size, scalar, first);
        return map_.blocks()[b].offset;
    };
    // Coefficients are sampled non-centred: u = coefficient / prior sd.
    if (n_phi_ > 0) off_.phi = add("phi", TransformKind::Scaled, n_phi_);
    if (n_ma_ > 0) off_.ma = add("ma", TransformKind::Scaled, n_ma_);
    if (n_beta_ > 0) off_.beta = add("beta", TransformKind::Scaled, n_beta_);
    if (s.family == Family::LTX) {
        off_.phi_state = add("phi_state", TransformKind::Symmetric, 1, true);
        off_.delta = add("delta", TransformKind::AR1State, T + 1, false, 0);
    }
    const int D = n_phi_ + n_ma_ + n_beta_;
    switch (s.prior.kind) {
        case PriorKind::Arr2:
            if (n_comp_ > 0) {
                off_.psi = add("psi", TransformKind::Simplex, n_comp_);
                off_.r2 = add("r2", TransformKind::UnitInterval, 1, true);
            }
            break;
        case PriorKind::Minnesota:
            dist::validate(s.prior.minnesota.kappa1);
            dist::validate(s.prior.minnesota.kappa2);
            if (n_phi_ + n_ma_ > 0) off_.kappa1 = add("kappa1", TransformKind::Positive, 1, true);
            if (n_beta_ > 0) off_.kappa2 = add("kappa2", TransformKind::Positive, 1, true);
            break;
        case PriorKind::Rhs:
            if (D > 0) {
                rhs_p0_ = s.prior.rhs.p0 > 0.0 ? s.prior.rhs.p0 : (n_phi_ > 0 ? n_phi_ / 2.0 : D / 2.0);
                rhs_n_ = n_obs();
                (void)priors::rhs_tau0(rhs_p0_, D, 1.0, rhs_n_);
                if (!(s.prior.rhs.slab_df > 0.0) || !(s.prior.rhs.slab_scale > 0.0)) {
                    throw std::invalid_argument("rhs slab df and scale must be positive");
                }
                off_.tau = add("tau", TransformKind::Positive, 1, true);
                off_.lambda = add("lambda", TransformKind::Positive, D);
                off_.c2 = add("c2", TransformKind::Positive, 1, true);
            }
            break;
        case PriorKind::Gaussian:
            if (!(s.prior.gaussian.sd > 0.0)) throw std::invalid_argument("gaussian prior sd must be positive");
            break;
    }
    if (s.family == Family::LTX && s.prior.kind != PriorKind::Arr2) {
        dist::validate(s.prior.state_scale_prior);
        off_.sigma_delta = add("sigma_delta", TransformKind::Positive, 1, true);
    }
    if (s.family == Family::LTX && !(s.prior.state_phi_sd > 0.0)) {
        throw std::invalid_argument("state_phi_sd must be positive");
    }
    off_.sigma = add("sigma", TransformKind::Positive, 1, true);

    // Window-major copies.
    const int n = n_obs();
    y_win_.assign(data_.y.begin() + cond_, data_.y.end());
    ylag_.resize(static_cast<std::size_t>(n) * n_phi_);
    for (int r = 0; r < n; ++r) {
        for (int i = 1; i <= n_phi_; ++i) ylag_[r * n_phi_ + i - 1] = data_.y[cond_ + r - i];
    }
    z_.resize(static_cast<std::size_t>(n) * n_beta_);
    for (int r = 0; r < n && n_beta_ > 0; ++r) design_row(data_, cond_ + r, &z_[r * n_beta_]);
}

void Model::design_row(const TimeSeriesData& d, int t, double* out) const {
    switch (spec_.family) {
        case Family::ARX:
        case Family::LTX:
            for (int c = 0; c < n_beta_; ++c) out[c] = d.x(t, c);
            break;
        case Family::ARDL: {
            const int g = spec_.g;
            for (int l = 0; l < d.m(); ++l) {
                for (int j = 1; j <= g; ++j) out[l * g + j - 1] = d.x(t - j, l);
            }
            break;
        }
        default:
            break;
    }
}

template <class T>
void Model::residuals(std::span<const T> x, std::vector<T>& e) const {
    const int n = n_obs();
    e.assign(n, T(0.0));
    std::span<const T> phi = n_phi_ > 0 ? x.subspan(off_.phi, n_phi_) : std::span<const T>();
    std::span<const T> ma = n_ma_ > 0 ? x.subspan(off_.ma, n_ma_) : std::span<const T>();
    std::span<const T> beta = n_beta_ > 0 ? x.subspan(off_.beta, n_beta_) : std::span<const T>();
    const std::span<const double> ylag(ylag_);
    const std::span<const double> z(z_);
    for (int r = 0; r < n; ++r) {
        T mu = 0.0;
        if (n_phi_ > 0) mu = math::dot(phi, ylag.subspan(static_cast<std::size_t>(r) * n_phi_, n_phi_));
        if (n_beta_ > 0) mu += math::dot(beta, z.subspan(static_cast<std::size_t>(r) * n_beta_, n_beta_));
        for (int j = 1; j <= n_ma_ && r - j >= 0; ++j) mu += ma[j - 1] * e[r - j];
        if (off_.delta >= 0) mu += x[off_.delta + cond_ + r + 1];
        e[r] = y_win_[r] - mu;
    }
}

template <class T>
T Model::log_likelihood(std::span<const T> x) const {
    using math::log;
    std::vector<T> e;
    residuals(x, e);
    const T& sigma = x[off_.sigma];
    const T ss = math::sum_squares(std::span<const T>(e));
    const double n = n_obs();
    return -n * dist::kLogSqrt2Pi - n * log(sigma) - 0.5 * ss / (sigma * sigma);
}

template <class T>
std::pair<T, T> Model::state_phi_scale(std::span<const T> x) const {
    using math::log;
    using math::log1p;
    using math::exp;
    if (off_.delta < 0) throw std::logic_error("model has no state block");
    const T& phi = x[off_.phi_state];
    if (off_.sigma_delta >= 0) return {phi, x[off_.sigma_delta]};
    const T& r2 = x[off_.r2];
    const T log_var = 2.0 * log(x[off_.sigma]) + log(r2) - log1p(-r2) + log1p(-phi * phi) +
                      log(x[off_.psi + state_comp_]);
    return {phi, exp(0.5 * log_var)};
}

template <class T>
std::vector<T> Model::coef_log_variances(std::span<const T> x) const {
    using math::log;
    using math::log1p;
    const auto& pr = spec_.prior;
    const int D = static_cast<int>(coef_.size());
    std::vector<T> lv(D, T(0.0));
    switch (pr.kind) {
        case PriorKind::Arr2: {
            if (n_comp_ == 0) break;
            const T& r2 = x[off_.r2];
            const T log_tau2 = log(r2) - log1p(-r2);
            const T log_sigma2 = 2.0 * log(x[off_.sigma]);
            std::vector<T> log_psi(n_comp_);
            for (int k = 0; k < n_comp_; ++k) log_psi[k] = log(x[off_.psi + k]);
            for (int c = 0; c < D; ++c) {
                const auto& cp = coef_[c];
                lv[c] = log_tau2 + log_psi[cp.component];
                if (cp.weight != 1.0) lv[c] += std::log(cp.weight);
                if (cp.sigma_scaled) lv[c] += log_sigma2 - std::log(cp.var_ref);
            }
            break;
        }
        case PriorKind::Minnesota: {
            const T lk1 = off_.kappa1 >= 0 ? log(x[off_.kappa1]) : T(0.0);
            const T lk2 = off_.kappa2 >= 0 ? log(x[off_.kappa2]) : T(0.0);
            for (int c = 0; c < D; ++c) {
                const auto& cp = coef_[c];
                lv[c] = (cp.kappa == 1 ? lk1 : lk2) + std::log(cp.kappa_ratio * cp.decay);
            }
            break;
        }
        case PriorKind::Rhs: {
            if (D == 0) break;
            const T& tau = x[off_.tau];
            const T& c2 = x[off_.c2];
            const T log_tau2 = 2.0 * log(tau);
            for (int c = 0; c < D; ++c) {
                lv[c] = log_tau2 + log(priors::rhs_lambda_tilde2(x[off_.lambda + c], tau, c2));
            }
            break;
        }
        case PriorKind::Gaussian:
            for (int c = 0; c < D; ++c) lv[c] = T(2.0 * std::log(pr.gaussian.sd));
            break;
    }
    return lv;
}

template <class T>
std::vector<T> Model::block_log_variances(std::span<const T> x, int offset, int size) const {
    const std::vector<T> lv = coef_log_variances(x);
    int first = 0;
    if (offset == off_.ma) first = n_phi_;
    else if (offset == off_.beta) first = n_phi_ + n_ma_;
    return std::vector<T>(lv.begin() + first, lv.begin() + first + size);
}

template <class T>
T Model::log_prior(std::span<const T> x) const {
    using math::exp;
    using math::log;
    using math::log1p;
    const auto& pr = spec_.prior;
    const T& sigma = x[off_.sigma];
    T lp = dist::logpdf_kernel(sigma_prior_, sigma);
    const T log_sigma = log(sigma);
    const int D = static_cast<int>(coef_.size());
    auto coef = [&](int c) -> const T& {
        if (c < n_phi_) return x[off_.phi + c];
        if (c < n_phi_ + n_ma_) return x[off_.ma + c - n_phi_];
        return x[off_.beta + c - n_phi_ - n_ma_];
    };
    const std::vector<T> lv = coef_log_variances(x);
    for (int c = 0; c < D; ++c) lp += priors::normal_zero_lpdf_logvar(coef(c), lv[c]);
    T log_state_var = 0.0;
    switch (pr.kind) {
        case PriorKind::Arr2: {
            if (n_comp_ == 0) break;
            const T& r2 = x[off_.r2];
            lp += dist::beta_lpdf(r2, pr.arr2.mu_r2 * pr.arr2.phi_r2, (1.0 - pr.arr2.mu_r2) * pr.arr2.phi_r2);
            const std::span<const T> psi = x.subspan(off_.psi, n_comp_);
            if (n_comp_ > 1) lp += dist::dirichlet_lpdf<T>(psi, xi_);
            if (off_.delta >= 0) {
                const T& phi = x[off_.phi_state];
                log_state_var = 2.0 * log_sigma + log(r2) - log1p(-r2) + log1p(-phi * phi) + log(psi[state_comp_]);
            }
            break;
        }
        case PriorKind::Minnesota: {
            const auto& mc = pr.minnesota;
            if (off_.kappa1 >= 0) lp += dist::gamma_lpdf(x[off_.kappa1], mc.kappa1.shape, mc.kappa1.rate);
            if (off_.kappa2 >= 0) lp += dist::gamma_lpdf(x[off_.kappa2], mc.kappa2.shape, mc.kappa2.rate);
            break;
        }
        case PriorKind::Rhs: {
            if (D == 0) break;
            const auto& rc = pr.rhs;
            const double tau0_unit = rhs_p0_ / (D - rhs_p0_) / std::sqrt(rhs_n_);
            lp += dist::half_cauchy_lpdf(x[off_.tau], tau0_unit * sigma);
            lp += dist::inv_gamma_lpdf(x[off_.c2], 0.5 * rc.slab_df, 0.5 * rc.slab_df * rc.slab_scale * rc.slab_scale);
            for (int c = 0; c < D; ++c) lp += dist::half_cauchy_lpdf(x[off_.lambda + c], 1.0);
            break;
        }
        case PriorKind::Gaussian:
            break;
    }
    if (off_.delta >= 0) {
        if (off_.sigma_delta >= 0) {
            const T& sd = x[off_.sigma_delta];
            lp += dist::logpdf_kernel(pr.state_scale_prior, sd);
            log_state_var = 2.0 * log(sd);
        }
        const T& phi = x[off_.phi_state];
        lp += dist::unit_truncated_normal_lpdf(phi, pr.state_phi_sd);
        const int len = data_.T() + 1;
        const std::span<const T> delta = x.subspan(off_.delta, len);
        std::vector<T> e(len);
        e[0] = delta[0];
        for (int t = 1; t < len; ++t) e[t] = delta[t] - phi * delta[t - 1];
        const T ss = math::sum_squares(std::span<const T>(e));
        lp += -len * dist::kLogSqrt2Pi - 0.5 * len * log_state_var - 0.5 * ss * exp(-log_state_var);
    }
    return lp;
}

template <class T>
T Model::log_posterior(std::span<const T> x) const {
    if (static_cast<int>(x.size()) != constrained_dim()) {
        throw std::invalid_argument("parameter vector has " + std::to_string(x.size()) + " entries, model expects " +
                                    std::to_string(constrained_dim()));
    }
    return log_likelihood(x) + log_prior(x);
}

template <class T>
T Model::log_density(std::span<const T> u) const {
    if (static_cast<int>(u.size()) != dim()) {
        throw std::invalid_argument("unconstrained vector has " + std::to_string(u.size()) + " entries, model expects " +
                                    std::to_string(dim()));
    }
    std::vector<T> x(constrained_dim());
    const T lj = map_.to_constrained(
        u, std::span<T>(x), [this](std::span<const T> xx) { return state_phi_scale(xx); },
        [this](std::span<const T> xx, int o, int n) { return block_log_variances(xx, o, n); });
    return lj + log_posterior(std::span<const T>(x));
}

template double Model::log_likelihood<double>(std::span<const double>) const;
template ad::Var Model::log_likelihood<ad::Var>(std::span<const ad::Var>) const;
template double Model::log_prior<double>(std::span<const double>) const;
template ad::Var Model::log_prior<ad::Var>(std::span<const ad::Var>) const;
template double Model::log_posterior<double>(std::span<const double>) const;
template ad::Var Model::log_posterior<ad::Var>(std::span<const ad::Var>) const;
template double Model::log_density<double>(std::span<const double>) const;
template ad::Var Model::log_density<ad::Var>(std::span<const ad::Var>) const;
template std::vector<double> Model::coef_log_variances<double>(std::span<const double>) const;
template std::vector<ad::Var> Model::coef_log_variances<ad::Var>(std::span<const ad::Var>) const;
template std::pair<double, double> Model::state_phi_scale<double>(std::span<const double>) const;
template std::pair<ad::Var, ad::Var> Model::state_phi_scale<ad::Var>(std::span<const ad::Var>) const;

std::vector<double> Model::to_constrained(std::span<const double> u, double* log_jacobian) const {
    if (static_cast<int>(u.size()) != dim()) throw std::invalid_argument("to_constrained: wrong dimension");
    std::vector<double> x(constrained_dim());
    const double lj = map_.to_constrained(
        u, std::span<double>(x), [this](std::span<const double> xx) { return state_phi_scale(xx); },
        [this](std::span<const double> xx, int o, int n) { return block_log_variances(xx, o, n); });
    if (log_jacobian != nullptr) *log_jacobian = lj;
    return x;
}

std::vector<double> Model::to_unconstrained(std::span<const double> x) const {
    return map_.to_unconstrained(
        x, [this](std::span<const double> xx) { return state_phi_scale(xx); },
        [this](std::span<const double> xx, int o, int n) { return block_log_variances(xx, o, n); });
}

double Model::coef_prior_variance(std::span<const double> x, int c) const {
    if (c < 0 || c >= static_cast<int>(coef_.size())) throw std::out_of_range("coefficient index out of range");
    return std::exp(coef_log_variances(x)[c]);
}

std::vector<double> Model::prior_signal_variances(std::span<const double> x) const {
    std::vector<double> v(n_comp_, 0.0);
    const double sigma2 = x[off_.sigma] * x[off_.sigma];
    for (int c = 0; c < static_cast<int>(coef_.size()); ++c) {
        const bool is_ma = c >= n_phi_ && c < n_phi_ + n_ma_;
        const double signal = is_ma ? sigma2 : coef_[c].var_ref;
        v[coef_[c].component] += signal * coef_prior_variance(x, c);
    }
    if (off_.delta >= 0) {
        const auto [phi, s] = state_phi_scale(x);
        v[state_comp_] += s * s / (1.0 - phi * phi);
    }
    return v;
}

std::vector<double> Model::sample_prior(Rng& rng) const {
    std::vector<double> x(constrained_dim(), 0.0);
    const auto& pr = spec_.prior;
    double sigma = 0.0;
    while (!(sigma > 0.0)) sigma = dist::sample(sigma_prior_, rng);
    x[off_.sigma] = sigma;
    switch (pr.kind) {
        case PriorKind::Arr2:
            if (n_comp_ > 0) {
                const dist::BetaMP b(pr.arr2.mu_r2, pr.arr2.phi_r2);
                double r2 = 0.0;
                while (!(r2 > 0.0 && r2 < 1.0)) r2 = dist::sample(b, rng);
                x[off_.r2] = r2;
                std::vector<double> psi(1, 1.0);
                if (n_comp_ > 1) {
                    const dist::Dirichlet d(xi_);
                    do {
                        psi = dist::sample(d, rng);
                    } while (*std::min_element(psi.begin(), psi.end()) <= 0.0);
                }
                std::copy(psi.begin(), psi.end(), x.begin() + off_.psi);
            }
            break;
        case PriorKind::Minnesota:
            if (off_.kappa1 >= 0) x[off_.kappa1] = dist::sample(dist::ScalarDist(pr.minnesota.kappa1), rng);
            if (off_.kappa2 >= 0) x[off_.kappa2] = dist::sample(dist::ScalarDist(pr.minnesota.kappa2), rng);
            break;
        case PriorKind::Rhs:
            if (off_.tau >= 0) {
                const int D = static_cast<int>(coef_.size());
                const double tau0 = priors::rhs_tau0(rhs_p0_, D, sigma, rhs_n_);
                x[off_.tau] = dist::sample(dist::ScalarDist(dist::HalfCauchy{tau0}), rng);
                for (int c = 0; c < D; ++c) x[off_.lambda + c] = dist::sample(dist::ScalarDist(dist::HalfCauchy{1.0}), rng);
                const double a = 0.5 * pr.rhs.slab_df;
                const double b = a * pr.rhs.slab_scale * pr.rhs.slab_scale;
                x[off_.c2] = dist::sample(dist::ScalarDist(dist::InvGamma{a, b}), rng);
            }
            break;
        case PriorKind::Gaussian:
            break;
    }
    if (off_.delta >= 0) {
        x[off_.phi_state] = dist::sample_unit_truncated_normal(pr.state_phi_sd, rng);
        if (off_.sigma_delta >= 0) x[off_.sigma_delta] = dist::sample(pr.state_scale_prior, rng);
    }
    for (int c = 0; c < static_cast<int>(coef_.size()); ++c) {
        const double sd = std::sqrt(coef_prior_variance(x, c));
        double v = sd > 0.0 ? dist::sample_normal(0.0, sd, rng) : 0.0;
        if (c < n_phi_) x[off_.phi + c] = v;
        else if (c < n_phi_ + n_ma_) x[off_.ma + c - n_phi_] = v;
        else x[off_.beta + c - n_phi_ - n_ma_] = v;
    }
    if (off_.delta >= 0) {
        const auto [phi, s] = state_phi_scale(std::span<const double>(x));
        const int len = data_.T() + 1;
        x[off_.delta] = dist::sample_normal(0.0, s, rng);
        for (int t = 1; t < len; ++t) x[off_.delta + t] = phi * x[off_.delta + t - 1] + dist::sample_normal(0.0, s, rng);
    }
    return x;
}

double Model::one_step_mean(std::span<const double> x, const TimeSeriesData& full, int t,
                            std::vector<double>& eps) const {
    double mu = 0.0;
    for (int i = 1; i <= n_phi_; ++i) mu += x[off_.phi + i - 1] * full.y[t - i];
    for (int j = 1; j <= n_ma_; ++j) mu += x[off_.ma + j - 1] * eps[t - j];
    if (n_beta_ > 0) {
        std::vector<double> row(n_beta_);
        design_row(full, t, row.data());
        for (int c = 0; c < n_beta_; ++c) mu += x[off_.beta + c] * row[c];
    }
    return mu;
}

double Model::predictive_logdensity(std::span<const double> x, const TimeSeriesData& full, int i, int M) const {
    if (M < 1) throw std::invalid_argument("predictive horizon must be >= 1");
    if (i + M > full.T()) {
        throw std::invalid_argument("predictive query " + std::to_string(i) + "+" + std::to_string(M) +
                                    " exceeds series length " + std::to_string(full.T()));
    }
    if (n_beta_ > 0 && full.m() != data_.m()) {
        throw std::invalid_argument("prediction data has a different number of covariate columns");
    }
    const double sigma = x[off_.sigma];
    double lp = 0.0;
    if (off_.delta < 0) {
        if (i < cond_) throw std::invalid_argument("prediction cut lies inside the conditioning window");
        std::vector<double> eps(full.T(), 0.0);
        const int start = n_ma_ > 0 ? cond_ : i;
        for (int t = start; t < i + M; ++t) {
            const double mu = one_step_mean(x, full, t, eps);
            eps[t] = full.y[t] - mu;
            if (t >= i) lp += dist::normal_lpdf(full.y[t], mu, sigma);
        }
        return lp;
    }
    const int t0 = data_.T();
    if (i < t0) throw std::invalid_argument("ltx prediction must start at or after the end of the fitted data");
    const auto [phi, s] = state_phi_scale(x);
    double m = x[off_.delta + t0];
    double P = 0.0;
    const double sigma2 = sigma * sigma;
    for (int t = t0; t < i + M; ++t) {
        m = phi * m;
        P = phi * phi * P + s * s;
        double mean = m;
        for (int c = 0; c < n_beta_; ++c) mean += x[off_.beta + c] * full.x(t, c);
        const double F = P + sigma2;
        if (t >= i) lp += dist::normal_lpdf(full.y[t], mean, std::sqrt(F));
        const double K = P / F;
        m += K * (full.y[t] - mean);
        P = (1.0 - K) * P;
    }
    return lp;
}

std::vector<double> Model::fitted_mean(std::span<const double> x) const {
    std::vector<double> e;
    residuals(x, e);
    for (std::size_t r = 0; r < e.size(); ++r) e[r] = y_win_[r] - e[r];
    return e;
}

double Model::bayes_r2(std::span<const double> x) const {
    const std::vector<double> mu = fitted_mean(x);
    const double v = ts::sample_variance(mu);
    const double s2 = x[off_.sigma] * x[off_.sigma];
    return v / (v + s2);
}

std::vector<std::vector<double>> Model::component_series(std::span<const double> x) const {
    const int n = n_obs();
    std::vector<std::vector<double>> out(n_comp_, std::vector<double>(n, 0.0));
    std::vector<double> e;
    if (n_ma_ > 0) residuals(x, e);
    for (int c = 0; c < static_cast<int>(coef_.size()); ++c) {
        auto& dst = out[coef_[c].component];
        for (int r = 0; r < n; ++r) {
            if (c < n_phi_) {
                dst[r] += x[off_.phi + c] * ylag_[r * n_phi_ + c];
            } else if (c < n_phi_ + n_ma_) {
                const int j = c - n_phi_ + 1;
                if (r - j >= 0) dst[r] += x[off_.ma + j - 1] * e[r - j];
            } else {
                const int b = c - n_phi_ - n_ma_;
                dst[r] += x[off_.beta + b] * z_[r * n_beta_ + b];
            }
        }
    }
    if (off_.delta >= 0) {
        for (int r = 0; r < n; ++r) out[state_comp_][r] = x[off_.delta + cond_ + r + 1];
    }
    return out;
}

double log_mean_exp(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("log_mean_exp: empty input");
    const double mx = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double a : v) s += std::exp(a - mx);
    return mx + std::log(s / static_cast<double>(v.size()));
}

double posterior_predictive_logdensity(const Model& model, const std::vector<std::vector<double>>& draws,
                                       const TimeSeriesData& full, int i, int M) {
    if (draws.empty()) throw std::invalid_argument("posterior_predictive_logdensity: no draws");
    std::vector<double> lp(draws.size());
    for (std::size_t s = 0; s < draws.size(); ++s) lp[s] = model.predictive_logdensity(draws[s], full, i, M);
    return log_mean_exp(lp);
}

}  // namespace arr2::models
