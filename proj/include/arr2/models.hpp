#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arr2/data.hpp"
#include "arr2/distributions.hpp"
#include "arr2/priors.hpp"
#include "arr2/transforms.hpp"

namespace arr2::models {

enum class Family { AR, ARX, MA, ARMA, ARDL, LTX };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

/**
 * @brief Model family, orders and prior.
 *
 * p: autoregressive lags, q: moving-average lags, g: covariate lags (ARDL
 * builds lags 1..g of each covariate; LTX expects the covariate matrix to
 * already hold g lag columns per covariate, covariate-major).
 */
struct ModelSpec {
    Family family = Family::AR;
    int p = 0;
    int q = 0;
    int g = 1;
    priors::PriorSpec prior;
};

/// Positions of each parameter block in the constrained vector (-1 if absent).
struct Offsets {
    int phi = -1;
    int ma = -1;
    int beta = -1;
    int phi_state = -1;
    int delta = -1;
    int psi = -1;
    int r2 = -1;
    int kappa1 = -1;
    int kappa2 = -1;
    int tau = -1;
    int lambda = -1;
    int c2 = -1;
    int sigma_delta = -1;
    int sigma = -1;
};

/**
 * @brief A model family bound to a dataset: parameter layout, log densities, predictions.
 *
 * Log densities are templated on the scalar type and instantiated for
 * double and ad::Var. The likelihood conditions on the first
 * conditioning() observations.
 */
class Model {
public:
    Model(ModelSpec spec, TimeSeriesData data);

    [[nodiscard]] const ModelSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] const TimeSeriesData& data() const noexcept { return data_; }
    [[nodiscard]] const DataStats& stats() const noexcept { return stats_; }
    [[nodiscard]] const inference::TransformMap& transforms() const noexcept { return map_; }
    [[nodiscard]] const Offsets& offsets() const noexcept { return off_; }
    [[nodiscard]] std::vector<std::string> names() const { return map_.names(); }
    [[nodiscard]] int dim() const noexcept { return map_.unconstrained_dim(); }
    [[nodiscard]] int constrained_dim() const noexcept { return map_.constrained_dim(); }
    [[nodiscard]] int conditioning() const noexcept { return cond_; }
    [[nodiscard]] int n_obs() const noexcept { return data_.T() - cond_; }
    [[nodiscard]] int n_phi() const noexcept { return n_phi_; }
    [[nodiscard]] int n_ma() const noexcept { return n_ma_; }
    [[nodiscard]] int n_beta() const noexcept { return n_beta_; }
    [[nodiscard]] bool has_state() const noexcept { return off_.delta >= 0; }
    /// Number of decomposition components (psi length under ARR2).
    [[nodiscard]] int n_components() const noexcept { return n_comp_; }
    [[nodiscard]] const std::vector<double>& concentrations() const noexcept { return xi_; }
    [[nodiscard]] const std::vector<priors::CoefPrior>& coef_priors() const noexcept { return coef_; }
    [[nodiscard]] const dist::ScalarDist& sigma_prior() const noexcept { return sigma_prior_; }
    [[nodiscard]] double rhs_p0() const noexcept { return rhs_p0_; }
    /// Component labels, one per decomposition component.
    [[nodiscard]] const std::vector<std::string>& component_names() const noexcept { return comp_names_; }

    template <class T>
    T log_likelihood(std::span<const T> x) const;
    template <class T>
    T log_prior(std::span<const T> x) const;
    template <class T>
    T log_posterior(std::span<const T> x) const;
    /// Log posterior in unconstrained coordinates, Jacobian included.
    template <class T>
    T log_density(std::span<const T> u) const;

    /// {state AR coefficient, state innovation sd} at a constrained point.
    template <class T>
    std::pair<T, T> state_phi_scale(std::span<const T> x) const;

    std::vector<double> to_constrained(std::span<const double> u, double* log_jacobian = nullptr) const;
    std::vector<double> to_unconstrained(std::span<const double> x) const;

    /// One joint draw from the prior, constrained.
    std::vector<double> sample_prior(Rng& rng) const;

    /// Conditional prior variance of coefficient c (phi, ma, beta order) at x.
    double coef_prior_variance(std::span<const double> x, int c) const;

    /**
     * @brief Prior signal variance per decomposition component at x.
     *
     * Each coefficient contributes var(regressor) * prior variance; the
     * state contributes its stationary variance. Under ARR2 the total is
     * sigma^2 tau^2.
     */
    std::vector<double> prior_signal_variances(std::span<const double> x) const;

    /**
     * @brief log p(y[i..i+M-1] | y[0..i-1], x) evaluated on `full`.
     *
     * `full` must extend this model's data (same covariate columns). LTX
     * needs i >= data().T() and filters the state through any observations
     * between the end of the training data and i.
     */
    double predictive_logdensity(std::span<const double> x, const TimeSeriesData& full, int i, int M) const;

    /// Realised conditional mean over the likelihood window.
    std::vector<double> fitted_mean(std::span<const double> x) const;

    /// In-sample Bayes R^2: var(mu) / (var(mu) + sigma^2).
    double bayes_r2(std::span<const double> x) const;

    /// Realised series of each decomposition component over the likelihood window.
    std::vector<std::vector<double>> component_series(std::span<const double> x) const;

    /// Observations inside the likelihood window.
    [[nodiscard]] std::span<const double> window_y() const noexcept { return y_win_; }

    /// Log prior variance of every coefficient (phi, ma, beta order) given the hyperparameters in x.
    template <class T>
    std::vector<T> coef_log_variances(std::span<const T> x) const;

private:
    template <class T>
    std::vector<T> block_log_variances(std::span<const T> x, int offset, int size) const;
    template <class T>
    void residuals(std::span<const T> x, std::vector<T>& e) const;
    double one_step_mean(std::span<const double> x, const TimeSeriesData& full, int t,
                         std::vector<double>& eps) const;
    void design_row(const TimeSeriesData& d, int t, double* out) const;

    ModelSpec spec_;
    TimeSeriesData data_;
    DataStats stats_;
    inference::TransformMap map_;
    Offsets off_;
    int cond_ = 0;
    int n_phi_ = 0;
    int n_ma_ = 0;
    int n_beta_ = 0;
    int n_comp_ = 0;
    int state_comp_ = -1;
    std::vector<double> xi_;
    std::vector<priors::CoefPrior> coef_;
    std::vector<std::string> comp_names_;
    dist::ScalarDist sigma_prior_;
    double rhs_p0_ = 0.0;
    double rhs_n_ = 1.0;
    // Window-major copies for the likelihood.
    std::vector<double> y_win_;
    std::vector<double> ylag_;  // n_obs x n_phi
    std::vector<double> z_;     // n_obs x n_beta
};

/**
 * @brief log of the draw-averaged predictive density (log-sum-exp).
 *
 * `draws` holds one constrained draw per row.
 */
double posterior_predictive_logdensity(const Model& model, const std::vector<std::vector<double>>& draws,
                                       const TimeSeriesData& full, int i, int M);

/// Numerically stable log(mean(exp(v))).
double log_mean_exp(std::span<const double> v);

}  // namespace arr2::models
