#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "arr2/dgp.hpp"
#include "arr2/diagnostics.hpp"
#include "arr2/fit.hpp"
#include "arr2/nuts.hpp"
#include "support.hpp"

using namespace arr2;
using namespace arr2::inference;

namespace {

/// Gaussian target with a fixed precision matrix.
class GaussianTarget final : public LogDensity {
public:
    GaussianTarget(Eigen::VectorXd mean, Eigen::MatrixXd cov) : mean_(std::move(mean)), prec_(cov.inverse()) {}
    [[nodiscard]] int dim() const override { return static_cast<int>(mean_.size()); }
    double log_density_gradient(std::span<const double> u, std::span<double> grad) const override {
        const Eigen::Map<const Eigen::VectorXd> x(u.data(), dim());
        const Eigen::VectorXd g = -prec_ * (x - mean_);
        for (int i = 0; i < dim(); ++i) grad[i] = g[i];
        return 0.5 * (x - mean_).dot(g);
    }

private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd prec_;
};

/// Unnormalised likelihood times prior for y_i ~ N(theta, 1), theta ~ N(0, 10^2).
class NormalMean final : public LogDensity {
public:
    explicit NormalMean(std::vector<double> y) : y_(std::move(y)) {}
    [[nodiscard]] int dim() const override { return 1; }
    double log_density_gradient(std::span<const double> u, std::span<double> grad) const override {
        double lp = -0.5 * u[0] * u[0] / 100.0;
        grad[0] = -u[0] / 100.0;
        for (double v : y_) {
            lp -= 0.5 * (v - u[0]) * (v - u[0]);
            grad[0] += v - u[0];
        }
        return lp;
    }

private:
    std::vector<double> y_;
};

class Nowhere final : public LogDensity {
public:
    [[nodiscard]] int dim() const override { return 2; }
    double log_density_gradient(std::span<const double>, std::span<double> grad) const override {
        grad[0] = grad[1] = 0.0;
        return -std::numeric_limits<double>::infinity();
    }
};

Chains pooled(const std::vector<ChainResult>& res, int col) {
    Chains c;
    for (const auto& r : res) {
        std::vector<double> v(r.draws.rows());
        for (int i = 0; i < r.draws.rows(); ++i) v[i] = r.draws(i, col);
        c.push_back(std::move(v));
    }
    return c;
}

std::vector<double> flatten(const Chains& c) {
    std::vector<double> v;
    for (const auto& ch : c) v.insert(v.end(), ch.begin(), ch.end());
    return v;
}

Chains iid_chains(int k, int n, unsigned seed, double offset_step = 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    Chains c(k, std::vector<double>(n));
    for (int j = 0; j < k; ++j)
        for (auto& v : c[j]) v = N(rng) + offset_step * j;
    return c;
}

}  // namespace

TEST_SUITE("inference") {

TEST_CASE("scalar transform reference values") {
    TransformMap unit, pos, simp;
    unit.add("r2", TransformKind::UnitInterval, 1, true);
    pos.add("sigma", TransformKind::Positive, 1, true);
    simp.add("psi", TransformKind::Simplex, 3);
    CHECK(std::abs(unit.to_unconstrained(std::vector<double>{0.5})[0]) < 1e-15);
    std::vector<double> x(1);
    CHECK(unit.to_constrained<double>(std::vector<double>{0.0}, x) == doctest::Approx(std::log(0.25)));
    CHECK(x[0] == 0.5);
    const auto u = pos.to_unconstrained(std::vector<double>{2.0});
    CHECK(u[0] == doctest::Approx(std::log(2.0)));
    CHECK(pos.to_constrained<double>(u, x) == doctest::Approx(std::log(2.0)));
    const std::vector<double> third = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    std::vector<double> back(3);
    simp.to_constrained<double>(simp.to_unconstrained(third), back);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(back[i] - third[i]) < 1e-14);
}

TEST_CASE("prior draws survive the constrained round trip") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> N(0.0, 1.0);
    std::vector<double> y(30);
    for (auto& v : y) v = N(rng);
    Eigen::MatrixXd xm(30, 4);
    for (int i = 0; i < 30; ++i)
        for (int j = 0; j < 4; ++j) xm(i, j) = N(rng);
    const TimeSeriesData d(y, xm);
    for (auto fam : {models::Family::AR, models::Family::ARX, models::Family::MA, models::Family::ARMA,
                     models::Family::ARDL, models::Family::LTX}) {
        for (auto k : {priors::PriorKind::Arr2, priors::PriorKind::Minnesota, priors::PriorKind::Rhs,
                       priors::PriorKind::Gaussian}) {
            models::ModelSpec s;
            s.family = fam;
            s.p = 2;
            s.q = 2;
            s.g = 2;
            s.prior.kind = k;
            const models::Model m(s, d);
            Rng r(7);
            double worst = 0.0;
            int tried = 0;
            for (int t = 0; t < 1000; ++t) {
                const auto x = m.sample_prior(r);
                std::vector<double> u;
                try {
                    u = m.to_unconstrained(x);
                } catch (const std::domain_error&) {
                    continue;  // a simplex entry underflowed to zero
                }
                ++tried;
                const auto back = m.to_constrained(u);
                for (std::size_t i = 0; i < x.size(); ++i) {
                    worst = std::max(worst, std::abs(back[i] - x[i]) / std::max(1.0, std::abs(x[i])));
                }
            }
            CAPTURE(models::to_string(fam));
            CAPTURE(priors::to_string(k));
            CHECK(tried > 900);
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("AR(1) and LTX gradients against finite differences") {
    Rng rng(3);
    dgp::LtxDgp g;
    g.T = 49;
    g.m = 5;
    g.lags = 1;
    const auto sim = dgp::simulate_ltx(g, rng);
    models::ModelSpec ltx;
    ltx.family = models::Family::LTX;
    ltx.g = 1;
    const models::Model m(ltx, sim.data);
    CHECK(m.transforms().blocks()[m.transforms().find("delta")].size == 50);
    dgp::ArDgp ag;
    ag.T = 120;
    models::ModelSpec ar;
    ar.p = 1;
    const models::Model a(ar, dgp::simulate_ar(ag, rng).data);
    std::mt19937_64 r(4);
    std::normal_distribution<double> N(0.0, 0.5);
    for (const models::Model* mm : {&a, &m}) {
        for (int t = 0; t < 5; ++t) {
            std::vector<double> u(mm->dim());
            for (auto& v : u) v = N(r);
            const auto gr = grad_logposterior(*mm, u);
            const auto fd = testing::fd_gradient([&](const std::vector<double>& v) { return mm->log_density<double>(v); }, u);
            for (int i = 0; i < mm->dim(); ++i) CHECK(std::abs(gr.gradient[i] - fd[i]) <= 1e-6 * std::max(1.0, std::abs(fd[i])));
        }
    }
}

TEST_CASE("non-finite density is flagged") {
    models::ModelSpec s;
    s.p = 1;
    const models::Model m(s, TimeSeriesData({0.1, 0.4, -0.3, 0.2, 0.0}));
    std::vector<double> u(m.dim(), 0.0);
    u.back() = 1e6;  // log sigma overflows
    const auto g = grad_logposterior(m, u);
    CHECK_FALSE(g.finite);
    CHECK(g.logdensity == -std::numeric_limits<double>::infinity());
}

TEST_CASE("conjugate normal mean") {
    // y_i ~ N(theta, 1), theta ~ N(0, 10^2): posterior is normal.
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N(1.5, 1.0);
    const int n = 20;
    std::vector<double> y(n);
    double sum = 0.0;
    for (auto& v : y) sum += (v = N(rng));
    const double prec = n + 0.01;
    const double post_mean = sum / prec, post_sd = 1.0 / std::sqrt(prec);
    NormalMean t(y);
    SamplerConfig cfg;
    cfg.seed = 11;
    const auto res = nuts_sample(t, cfg);
    const Chains c = pooled(res, 0);
    const auto v = flatten(c);
    const double ess = ess_bulk(c);
    const double mcse = post_sd / std::sqrt(ess);
    CHECK(std::abs(testing::mean(v) - post_mean) < 3 * mcse);
    // sd of the sd estimate is about sd / sqrt(2 ess).
    CHECK(std::abs(std::sqrt(testing::var(v)) - post_sd) < 3 * post_sd / std::sqrt(2 * ess));
}

TEST_CASE("10-dimensional standard normal") {
    GaussianTarget t(Eigen::VectorXd::Zero(10), Eigen::MatrixXd::Identity(10, 10));
    SamplerConfig cfg;
    cfg.seed = 12;
    // ESS of x^2 is about 0.4 n under NUTS, so 5% needs more than 4 x 1000 draws.
    cfg.samples = 5000;
    const auto res = nuts_sample(t, cfg);
    for (int j = 0; j < 10; ++j) {
        const Chains c = pooled(res, j);
        CHECK(std::abs(testing::var(flatten(c)) - 1.0) < 0.05);
        CHECK(split_rhat(c) < 1.01);
    }
}

TEST_CASE("correlated 2-d normal covariance") {
    Eigen::MatrixXd S(2, 2);
    S << 1.0, 0.9, 0.9, 2.0;
    GaussianTarget t(Eigen::Vector2d(1.0, -1.0), S);
    SamplerConfig cfg;
    cfg.samples = 2000;
    cfg.seed = 13;
    const auto res = nuts_sample(t, cfg);
    const auto a = flatten(pooled(res, 0)), b = flatten(pooled(res, 1));
    const double ma = testing::mean(a), mb = testing::mean(b);
    double cab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) cab += (a[i] - ma) * (b[i] - mb);
    cab /= static_cast<double>(a.size() - 1);
    CHECK(a.size() == 8000);
    CHECK(std::abs(testing::var(a) / 1.0 - 1.0) < 0.05);
    CHECK(std::abs(testing::var(b) / 2.0 - 1.0) < 0.05);
    CHECK(std::abs(cab / 0.9 - 1.0) < 0.05);
}

TEST_CASE("sampling is reproducible and independent of the job count") {
    GaussianTarget t(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3));
    SamplerConfig cfg;
    cfg.warmup = 200;
    cfg.samples = 100;
    cfg.seed = 99;
    const auto a = nuts_sample(t, cfg);
    cfg.jobs = 3;
    const auto b = nuts_sample(t, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t c = 0; c < a.size(); ++c) CHECK(a[c].draws == b[c].draws);
    cfg.seed = 100;
    const auto d = nuts_sample(t, cfg);
    CHECK(a[0].draws != d[0].draws);
}

TEST_CASE("initialisation failure is reported") {
    Nowhere t;
    SamplerConfig cfg;
    cfg.chains = 1;
    CHECK_THROWS(nuts_sample(t, cfg));
}

TEST_CASE("sampler config validation") {
    SamplerConfig cfg;
    cfg.chains = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SamplerConfig{};
    cfg.target_accept = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("AR(1) ARR2 fit rarely diverges") {
    Rng rng(21);
    dgp::ArDgp g;
    g.T = 120;
    const auto sim = dgp::simulate_ar(g, rng);
    models::ModelSpec s;
    s.p = 1;
    const models::Model m(s, sim.data);
    SamplerConfig cfg;
    cfg.target_accept = 0.9;
    cfg.seed = 5;
    const auto res = fit(m, cfg);
    CHECK(res.diagnostics.total_draws == 4000);
    CHECK(res.diagnostics.divergences < 0.005 * res.diagnostics.total_draws);
    CHECK(res.diagnostics.max_rhat < 1.01);
    CHECK(res.draws.has("phi.1"));
    CHECK(res.draws.mean(res.draws.col("phi.1")) == doctest::Approx(0.6).epsilon(0.3));
}

TEST_CASE("diagnostics on known chains") {
    const Chains iid = iid_chains(4, 1000, 1);
    CHECK(split_rhat(iid) >= 0.99);
    CHECK(split_rhat(iid) <= 1.01);
    CHECK(rhat_basic(iid) <= 1.01);
    const Chains same = {iid[0], iid[0]};
    CHECK(split_rhat(same) <= 1.01);
    CHECK(split_rhat(iid_chains(2, 500, 2, 10.0)) > 1.1);
    CHECK(std::abs(ess_bulk(iid) / 4000.0 - 1.0) < 0.2);
    CHECK(std::abs(ess_basic(iid) / 4000.0 - 1.0) < 0.2);
    CHECK(ess_tail(iid) > 0.6 * 4000.0);
    const Chains flat = {std::vector<double>(100, 1.0), std::vector<double>(100, 1.0)};
    CHECK(std::isnan(split_rhat(flat)));
}

TEST_CASE("autocorrelated chains have fewer effective draws") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N(0.0, 1.0);
    const double rho = 0.9;
    Chains c(4, std::vector<double>(5000));
    for (auto& ch : c) {
        double v = N(rng) / std::sqrt(1 - rho * rho);
        for (auto& x : ch) x = v = rho * v + N(rng);
    }
    // AR(1) ESS is n (1 - rho) / (1 + rho).
    const double expect = 20000.0 * (1 - rho) / (1 + rho);
    CHECK(ess_basic(c) == doctest::Approx(expect).epsilon(0.2));
}

TEST_CASE("split chains and quantiles") {
    const Chains c = {{1, 2, 3, 4, 5}, {6, 7, 8, 9, 10}};
    const auto s = split_chains(c);
    REQUIRE(s.size() == 4);
    CHECK(s[0] == std::vector<double>{1, 2});
    CHECK(s[1] == std::vector<double>{4, 5});
    CHECK(quantile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile({1, 2, 3, 4}, 0.0) == 1.0);
    CHECK(quantile({1, 2, 3, 4}, 1.0) == 4.0);
    const auto z = rank_normalize({{1.0, 2.0}, {3.0, 4.0}});
    CHECK(z[0][0] < z[0][1]);
    CHECK(z[0][0] == doctest::Approx(-z[1][1]));
}

TEST_CASE("diagnose needs two chains") {
    DrawsMatrix d;
    d.names = {"a"};
    d.chains = 1;
    d.per_chain = 50;
    d.values = Eigen::MatrixXd::Random(50, 1);
    d.divergent.assign(50, 0);
    d.energy.assign(50, 0.0);
    d.accept_stat.assign(50, 0.9);
    d.treedepth.assign(50, 3);
    const auto diag = diagnose(d);
    CHECK(std::isnan(diag.params[0].rhat));
    CHECK(std::isnan(diag.params[0].ess_bulk));
    CHECK(diag.params[0].mean == doctest::Approx(d.values.col(0).mean()));
    CHECK_THROWS(d.col("b"));
}

}  // TEST_SUITE
