#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <type_traits>
#include <variant>
#include <vector>

#include "arr2/ad.hpp"

namespace arr2 {

using Rng = std::mt19937_64;

}  // namespace arr2

namespace arr2::dist {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;
inline constexpr double kLog2 = std::numbers::ln2;

/// Var if any argument is a Var, otherwise double.
template <class... Ts>
using scalar_t = std::conditional_t<(std::is_same_v<std::decay_t<Ts>, ad::Var> || ...), ad::Var, double>;

// ---------------------------------------------------------------------------
// Log-density kernels. Templated so model code can run them on the AD tape.
// All are fully normalised; support checks are the caller's job.

template <class X, class M, class S>
scalar_t<X, M, S> normal_lpdf(const X& x, const M& mean, const S& sd) {
    using math::log;
    const auto z = (x - mean) / sd;
    return -kLogSqrt2Pi - log(sd) - 0.5 * z * z;
}

template <class X, class S>
scalar_t<X, S> half_normal_lpdf(const X& x, const S& sd) {
    return kLog2 + normal_lpdf(x, 0.0, sd);
}

template <class X, class S>
scalar_t<X, S> half_cauchy_lpdf(const X& x, const S& scale) {
    using math::log;
    using math::log1p;
    const auto z = x / scale;
    return std::log(2.0 / std::numbers::pi) - log(scale) - log1p(z * z);
}

template <class X>
scalar_t<X> gamma_lpdf(const X& x, double shape, double rate) {
    using math::log;
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * log(x) - rate * x;
}

template <class X>
scalar_t<X> inv_gamma_lpdf(const X& x, double shape, double scale) {
    using math::log;
    return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * log(x) - scale / x;
}

template <class X>
scalar_t<X> beta_lpdf(const X& x, double a, double b) {
    using math::log;
    using math::log1p;
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * log(x) +
           (b - 1.0) * log1p(-x);
}

/// Dirichlet density on the (K-1)-simplex, x given as all K components.
template <class T>
T dirichlet_lpdf(std::span<const T> x, std::span<const double> xi) {
    using math::log;
    double norm = 0.0;
    double total = 0.0;
    for (double v : xi) {
        norm -= std::lgamma(v);
        total += v;
    }
    norm += std::lgamma(total);
    T acc = norm;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (xi[k] != 1.0) acc += (xi[k] - 1.0) * log(x[k]);
    }
    return acc;
}

/// Normal(0, sd) truncated to (-1, 1).
template <class X>
scalar_t<X> unit_truncated_normal_lpdf(const X& x, double sd) {
    const double mass = std::erf(1.0 / (sd * std::numbers::sqrt2));
    return normal_lpdf(x, 0.0, sd) - std::log(mass);
}

// ---------------------------------------------------------------------------
// Distribution value types.

/**
 * @brief Beta distribution in mean/precision form.
 */
struct BetaMP {
    double mu;
    double phi;

    BetaMP(double mu, double phi);
    [[nodiscard]] double a() const noexcept { return mu * phi; }
    [[nodiscard]] double b() const noexcept { return (1.0 - mu) * phi; }
};

/**
 * @brief Beta-prime with shapes taken from a BetaMP.
 *
 * If x ~ BetaPrime(mu, phi) then x / (1 + x) ~ BetaMP(mu, phi).
 */
struct BetaPrime {
    double mu;
    double phi;

    BetaPrime(double mu, double phi);
    [[nodiscard]] double a() const noexcept { return mu * phi; }
    [[nodiscard]] double b() const noexcept { return (1.0 - mu) * phi; }
};

/**
 * @brief Generalised beta-prime: d * x^(1/c) for x ~ BetaPrime with shapes (a, b).
 */
struct GBP {
    double a;
    double b;
    double c;
    double d;

    GBP(double a, double b, double c, double d);
};

struct Dirichlet {
    std::vector<double> xi;

    explicit Dirichlet(std::vector<double> xi);
};

struct Normal {
    double mean = 0.0;
    double sd = 1.0;
};
struct HalfNormal {
    double sd = 1.0;
};
struct HalfCauchy {
    double scale = 1.0;
};
struct GammaShapeRate {
    double shape = 1.0;
    double rate = 1.0;
};
struct InvGamma {
    double shape = 1.0;
    double scale = 1.0;
};

using ScalarDist = std::variant<Normal, HalfNormal, HalfCauchy, GammaShapeRate, InvGamma>;

/// Throws std::invalid_argument on non-positive scale/shape/rate.
void validate(const ScalarDist& d);

/// True if the distribution lives on [0, inf).
bool is_positive(const ScalarDist& d);

double logpdf(const BetaMP& d, double x);
double logpdf(const BetaPrime& d, double x);
double logpdf(const GBP& d, double x);
double logpdf(const Dirichlet& d, std::span<const double> x);
double logpdf(const ScalarDist& d, double x);

/// Templated scalar log-density with no support check (used inside models).
template <class T>
T logpdf_kernel(const ScalarDist& d, const T& x) {
    return std::visit(
        [&](const auto& dd) -> T {
            using D = std::decay_t<decltype(dd)>;
            if constexpr (std::is_same_v<D, Normal>) return normal_lpdf(x, dd.mean, dd.sd);
            else if constexpr (std::is_same_v<D, HalfNormal>) return half_normal_lpdf(x, dd.sd);
            else if constexpr (std::is_same_v<D, HalfCauchy>) return half_cauchy_lpdf(x, dd.scale);
            else if constexpr (std::is_same_v<D, GammaShapeRate>) return gamma_lpdf(x, dd.shape, dd.rate);
            else return inv_gamma_lpdf(x, dd.shape, dd.scale);
        },
        d);
}

double cdf(const BetaMP& d, double x);
double cdf(const BetaPrime& d, double x);
double cdf(const GBP& d, double x);

double sample(const BetaMP& d, Rng& rng);
double sample(const BetaPrime& d, Rng& rng);
double sample(const GBP& d, Rng& rng);
std::vector<double> sample(const Dirichlet& d, Rng& rng);
double sample(const ScalarDist& d, Rng& rng);

double sample_gamma(double shape, double rate, Rng& rng);
double sample_normal(double mean, double sd, Rng& rng);
/// Normal(0, sd) truncated to (-1, 1), by rejection.
double sample_unit_truncated_normal(double sd, Rng& rng);

/// tau^2 = r2 / (1 - r2). Throws std::domain_error outside (0, 1).
double beta_to_betaprime(double r2);
/// d * x^(1/c). Throws std::domain_error on non-positive input.
double gbp_from_betaprime(double x, double c, double d);

}  // namespace arr2::dist
