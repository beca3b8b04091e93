#include "arr2/distributions.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <numeric>
#include <stdexcept>
#include <string>

namespace arr2::dist {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be positive and finite, got " +
                                    std::to_string(v));
    }
}

void require_mean(double mu) {
    if (!(mu > 0.0 && mu < 1.0)) {
        throw std::invalid_argument("mean must lie in (0, 1), got " + std::to_string(mu));
    }
}

double lbeta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

double betaprime_lpdf(double x, double a, double b) {
    return (a - 1.0) * std::log(x) - (a + b) * std::log1p(x) - lbeta(a, b);
}

}  // namespace

BetaMP::BetaMP(double mu_, double phi_) : mu(mu_), phi(phi_) {
    require_mean(mu);
    require_positive(phi, "precision");
}

BetaPrime::BetaPrime(double mu_, double phi_) : mu(mu_), phi(phi_) {
    require_mean(mu);
    require_positive(phi, "precision");
}

GBP::GBP(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    require_positive(a, "shape a");
    require_positive(b, "shape b");
    require_positive(c, "power c");
    require_positive(d, "scale d");
}

Dirichlet::Dirichlet(std::vector<double> xi_) : xi(std::move(xi_)) {
    if (xi.empty()) throw std::invalid_argument("Dirichlet needs at least one component");
    for (double v : xi) require_positive(v, "concentration");
}

void validate(const ScalarDist& d) {
    std::visit(
        [](const auto& dd) {
            using D = std::decay_t<decltype(dd)>;
            if constexpr (std::is_same_v<D, Normal>) require_positive(dd.sd, "sd");
            else if constexpr (std::is_same_v<D, HalfNormal>) require_positive(dd.sd, "sd");
            else if constexpr (std::is_same_v<D, HalfCauchy>) require_positive(dd.scale, "scale");
            else if constexpr (std::is_same_v<D, GammaShapeRate>) {
                require_positive(dd.shape, "shape");
                require_positive(dd.rate, "rate");
            } else {
                require_positive(dd.shape, "shape");
                require_positive(dd.scale, "scale");
            }
        },
        d);
}

bool is_positive(const ScalarDist& d) { return !std::holds_alternative<Normal>(d); }

double logpdf(const BetaMP& d, double x) {
    if (!(x > 0.0 && x < 1.0)) return kNegInf;
    return beta_lpdf(x, d.a(), d.b());
}

double logpdf(const BetaPrime& d, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) return kNegInf;
    return betaprime_lpdf(x, d.a(), d.b());
}

double logpdf(const GBP& d, double y) {
    if (!(y > 0.0) || !std::isfinite(y)) return kNegInf;
    const double u = y / d.d;
    const double x = std::pow(u, d.c);
    return std::log(d.c) - std::log(d.d) + (d.c - 1.0) * std::log(u) + betaprime_lpdf(x, d.a, d.b);
}

double logpdf(const Dirichlet& d, std::span<const double> x) {
    if (x.size() != d.xi.size()) {
        throw std::invalid_argument("Dirichlet: point has " + std::to_string(x.size()) +
                                    " components, expected " + std::to_string(d.xi.size()));
    }
    double total = 0.0;
    for (double v : x) {
        if (!(v > 0.0)) return kNegInf;
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-10) return kNegInf;
    return dirichlet_lpdf<double>(x, d.xi);
}

double logpdf(const ScalarDist& d, double x) {
    if (!std::isfinite(x)) return kNegInf;
    if (is_positive(d)) {
        if (x < 0.0) return kNegInf;
        const bool open = std::holds_alternative<GammaShapeRate>(d) || std::holds_alternative<InvGamma>(d);
        if (open && x == 0.0) {
            if (const auto* g = std::get_if<GammaShapeRate>(&d); g && g->shape == 1.0) {
                return std::log(g->rate);
            }
            return kNegInf;
        }
    }
    return logpdf_kernel(d, x);
}

double cdf(const BetaMP& d, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return boost::math::ibeta(d.a(), d.b(), x);
}

double cdf(const BetaPrime& d, double x) {
    if (x <= 0.0) return 0.0;
    return boost::math::ibeta(d.a(), d.b(), x / (1.0 + x));
}

double cdf(const GBP& d, double y) {
    if (y <= 0.0) return 0.0;
    const double x = std::pow(y / d.d, d.c);
    return boost::math::ibeta(d.a, d.b, x / (1.0 + x));
}

double sample_gamma(double shape, double rate, Rng& rng) {
    std::gamma_distribution<double> g(shape, 1.0 / rate);
    return g(rng);
}

double sample_normal(double mean, double sd, Rng& rng) {
    std::normal_distribution<double> n(mean, sd);
    return n(rng);
}

double sample_unit_truncated_normal(double sd, Rng& rng) {
    for (;;) {
        const double x = sample_normal(0.0, sd, rng);
        if (x > -1.0 && x < 1.0) return x;
    }
}

double sample(const BetaMP& d, Rng& rng) {
    const double x = sample_gamma(d.a(), 1.0, rng);
    const double y = sample_gamma(d.b(), 1.0, rng);
    return x / (x + y);
}

double sample(const BetaPrime& d, Rng& rng) {
    const double x = sample_gamma(d.a(), 1.0, rng);
    const double y = sample_gamma(d.b(), 1.0, rng);
    return x / y;
}

double sample(const GBP& d, Rng& rng) {
    const double x = sample_gamma(d.a, 1.0, rng) / sample_gamma(d.b, 1.0, rng);
    return gbp_from_betaprime(x, d.c, d.d);
}

std::vector<double> sample(const Dirichlet& d, Rng& rng) {
    const std::size_t k = d.xi.size();
    std::vector<double> out(k);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        out[i] = sample_gamma(d.xi[i], 1.0, rng);
        total += out[i];
    }
    if (k == 1) {
        out[0] = 1.0;
        return out;
    }
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        out[i] /= total;
        head += out[i];
    }
    out[k - 1] = 1.0 - head;
    return out;
}

double sample(const ScalarDist& d, Rng& rng) {
    return std::visit(
        [&](const auto& dd) -> double {
            using D = std::decay_t<decltype(dd)>;
            if constexpr (std::is_same_v<D, Normal>) {
                return sample_normal(dd.mean, dd.sd, rng);
            } else if constexpr (std::is_same_v<D, HalfNormal>) {
                return std::abs(sample_normal(0.0, dd.sd, rng));
            } else if constexpr (std::is_same_v<D, HalfCauchy>) {
                std::cauchy_distribution<double> c(0.0, dd.scale);
                return std::abs(c(rng));
            } else if constexpr (std::is_same_v<D, GammaShapeRate>) {
                return sample_gamma(dd.shape, dd.rate, rng);
            } else {
                return 1.0 / sample_gamma(dd.shape, dd.scale, rng);
            }
        },
        d);
}

double beta_to_betaprime(double r2) {
    if (!(r2 > 0.0 && r2 < 1.0)) {
        throw std::domain_error("R2 must lie in (0, 1), got " + std::to_string(r2));
    }
    return r2 / (1.0 - r2);
}

double gbp_from_betaprime(double x, double c, double d) {
    if (!(x > 0.0) || !(c > 0.0) || !(d > 0.0)) {
        throw std::domain_error("gbp_from_betaprime needs positive x, c and d");
    }
    return d * std::pow(x, 1.0 / c);
}

}  // namespace arr2::dist
