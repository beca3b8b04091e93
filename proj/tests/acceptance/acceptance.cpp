// Acceptance run: one PASS/FAIL line per criterion. Tolerances are pinned below.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fmt/core.h>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arr2/cli/commands.hpp"
#include "arr2/dgp.hpp"
#include "arr2/diagnostics.hpp"
#include "arr2/evaluation.hpp"
#include "arr2/fit.hpp"
#include "arr2/models.hpp"
#include "arr2/nuts.hpp"
#include "arr2/tsmath.hpp"

namespace fs = std::filesystem;
using namespace arr2;
using models::Family;
using models::Model;
using models::ModelSpec;
using priors::PriorKind;

namespace {

// 1
constexpr int kPushDraws = 50000;
constexpr double kPushKs = 0.01;
constexpr double kPushSeconds = 10.0;
// 2
constexpr double kNonstationaryMin = 0.5;
constexpr double kNonstationarySeconds = 10.0;
// 3
constexpr int kYwSteps = 10000000;
constexpr int kYwLags = 8;
constexpr double kYwRelErr = 0.01;
constexpr double kYwSeconds = 60.0;
// 4
constexpr int kGradPoints = 50;
constexpr double kGradRelErr = 1e-5;
constexpr double kGradSeconds = 120.0;
// 5
constexpr double kCalibMcse = 3.0;
constexpr double kCovRelErr = 0.05;
constexpr int kCovSamplesPerChain = 2000;
constexpr double kCalibSeconds = 60.0;
// 6
constexpr int kArReps = 5;
constexpr int kArWinsNeeded = 4;
constexpr double kArLagRatio = 2.0;
constexpr double kArSeconds = 15.0 * 60.0;
// 7
constexpr int kLtxReps = 10;
constexpr double kLtxSeconds = 30.0 * 60.0;
// 8
constexpr double kLfoAbsErr = 1e-12;
// 9
constexpr double kRelR2AbsErr = 1e-8;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

ModelSpec spec_of(Family f, int p, int q, int g, PriorKind k) {
    ModelSpec s;
    s.family = f;
    s.p = p;
    s.q = q;
    s.g = g;
    s.prior.kind = k;
    return s;
}

TimeSeriesData noise_data(int T, int m, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    std::vector<double> y(T);
    for (auto& v : y) v = N(rng);
    Eigen::MatrixXd x(T, m);
    for (int i = 0; i < T; ++i)
        for (int j = 0; j < m; ++j) x(i, j) = N(rng);
    return TimeSeriesData(std::move(y), std::move(x));
}

double ks_sorted(std::vector<double> v, const std::function<double(double)>& cdf) {
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double F = cdf(v[i]);
        d = std::max({d, std::abs(F - i / n), std::abs((i + 1) / n - F)});
    }
    return d;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double average(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Stationary covariance of the companion state by vectorisation: vec(S) = (I - A (x) A)^-1 vec(Q).
Eigen::MatrixXd companion_covariance(const std::vector<double>& phi, double sigma2) {
    const int p = static_cast<int>(phi.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < p; ++i) A(0, i) = phi[i];
    for (int i = 1; i < p; ++i) A(i, i - 1) = 1.0;
    Eigen::MatrixXd K(p * p, p * p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) K.block(i * p, j * p, p, p) = A(i, j) * A;
    Eigen::VectorXd q = Eigen::VectorXd::Zero(p * p);
    q[0] = sigma2;
    const Eigen::VectorXd s = (Eigen::MatrixXd::Identity(p * p, p * p) - K).partialPivLu().solve(q);
    return Eigen::Map<const Eigen::MatrixXd>(s.data(), p, p);
}

// 1. Implied R2 of ARR2 prior draws is Beta(1, 2) for every concentration scheme.
Outcome criterion1() {
    const auto t0 = Clock::now();
    const auto d = noise_data(120, 0, 1);
    double worst = 0.0;
    for (const char* scheme : {"minnesota", "flat", "sparse"}) {
        ModelSpec s = spec_of(Family::AR, 12, 0, 1, PriorKind::Arr2);
        s.prior.arr2.scheme = scheme;
        Rng rng(1);
        const auto pf = eval::prior_pushforward(Model(s, d), kPushDraws, rng);
        // Beta(mu phi, (1 - mu) phi) = Beta(1, 2) has cdf 1 - (1 - x)^2.
        worst = std::max(worst, ks_sorted(pf.r2, [](double x) { return 1.0 - (1.0 - x) * (1.0 - x); }));
    }
    const double secs = seconds_since(t0);
    return {worst < kPushKs && secs / 3.0 < kPushSeconds,
            fmt::format("max KS {:.5f} < {} over 3 schemes; {:.1f} s per scheme", worst, kPushKs, secs / 3.0)};
}

// 2. Independent N(0, 1) coefficients at p = 12 are mostly non-stationary.
Outcome criterion2() {
    const auto t0 = Clock::now();
    const Model m(spec_of(Family::AR, 12, 0, 1, PriorKind::Gaussian), noise_data(120, 0, 2));
    Rng rng(2);
    const int n = 20000;
    int bad = 0;
    for (int s = 0; s < n; ++s) {
        const auto x = m.sample_prior(rng);
        const std::vector<double> phi(x.begin() + m.offsets().phi, x.begin() + m.offsets().phi + 12);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(12, 12);
        for (int i = 0; i < 12; ++i) A(0, i) = phi[i];
        for (int i = 1; i < 12; ++i) A(i, i - 1) = 1.0;
        bad += A.eigenvalues().cwiseAbs().maxCoeff() >= 1.0;
    }
    const double frac = static_cast<double>(bad) / n;
    const double secs = seconds_since(t0);
    return {frac >= kNonstationaryMin && secs < kNonstationarySeconds,
            fmt::format("non-stationary fraction {:.4f} >= {} ({} draws, {:.1f} s)", frac, kNonstationaryMin, n, secs)};
}

// 3. Yule-Walker autocovariances against long simulations.
Outcome criterion3() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    const std::vector<std::pair<const char*, std::vector<double>>> cases = {
        {"minnesota", dgp::minnesota_phi()}, {"oscillation", dgp::oscillation_phi()}, {"delayed", dgp::delayed_phi()}};
    std::string where;
    for (const auto& [name, phi] : cases) {
        dgp::ArDgp g;
        g.phi = phi;
        g.T = kYwSteps;
        Rng rng(3);
        const auto sim = dgp::simulate_ar(g, rng);
        const auto emp = ts::sample_autocovariance(sim.data.y, kYwLags);
        const auto yw = ts::yule_walker(phi, 1.0, kYwLags);
        for (int k = 0; k <= kYwLags; ++k) {
            const double e = std::abs(emp[k] / yw[k] - 1.0);
            if (e > worst) {
                worst = e;
                where = fmt::format("{} lag {}", name, k);
            }
        }
    }
    const double secs = seconds_since(t0);
    return {worst < kYwRelErr && secs < kYwSeconds,
            fmt::format("max relative error {:.5f} < {} ({}); {:.1f} s", worst, kYwRelErr, where, secs)};
}

// 4. Reverse-mode gradients against finite differences.
Outcome criterion4() {
    const auto t0 = Clock::now();
    const auto d = noise_data(40, 3, 4);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> N(0.0, 0.5);
    double worst = 0.0;
    int checked = 0;
    std::string where;
    for (auto k : {PriorKind::Arr2, PriorKind::Minnesota, PriorKind::Rhs, PriorKind::Gaussian}) {
        for (const auto& s : {spec_of(Family::AR, 3, 0, 1, k), spec_of(Family::ARX, 2, 0, 1, k),
                              spec_of(Family::MA, 0, 2, 1, k), spec_of(Family::ARMA, 2, 2, 1, k),
                              spec_of(Family::ARDL, 2, 0, 2, k), spec_of(Family::LTX, 0, 0, 3, k)}) {
            const Model m(s, d);
            const auto f = [&](const std::vector<double>& v) { return m.log_density<double>(v); };
            for (int t = 0; t < kGradPoints; ++t) {
                std::vector<double> u(m.dim());
                for (auto& v : u) v = N(rng);
                const auto g = inference::grad_logposterior(m, u);
                for (int i = 0; i < m.dim(); ++i) {
                    // Richardson-extrapolated central difference.
                    const double h = 1e-3 * std::max(1.0, std::abs(u[i]));
                    auto at = [&](double dx) {
                        auto w = u;
                        w[i] += dx;
                        return f(w);
                    };
                    const double d1 = (at(h) - at(-h)) / (2.0 * h);
                    const double d2 = (at(h / 2) - at(-h / 2)) / h;
                    const double fd = (4.0 * d2 - d1) / 3.0;
                    const double e = std::abs(g.gradient[i] - fd) / std::max(1.0, std::abs(fd));
                    if (!g.finite) worst = INFINITY;
                    if (e > worst) {
                        worst = e;
                        where = models::to_string(s.family) + "/" + priors::to_string(k);
                    }
                    ++checked;
                }
            }
        }
    }
    const double secs = seconds_since(t0);
    return {worst < kGradRelErr && secs < kGradSeconds,
            fmt::format("max relative error {:.2e} < {:.0e} over {} partials, 24 model/prior pairs x {} points (worst {}); "
                        "{:.1f} s",
                        worst, kGradRelErr, checked, kGradPoints, where, secs)};
}

class NormalMean final : public inference::LogDensity {
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

class Gaussian2 final : public inference::LogDensity {
public:
    Gaussian2(Eigen::Vector2d mean, const Eigen::Matrix2d& cov) : mean_(std::move(mean)), prec_(cov.inverse()) {}
    [[nodiscard]] int dim() const override { return 2; }
    double log_density_gradient(std::span<const double> u, std::span<double> grad) const override {
        const Eigen::Vector2d x(u[0], u[1]);
        const Eigen::Vector2d g = -prec_ * (x - mean_);
        grad[0] = g[0];
        grad[1] = g[1];
        return 0.5 * (x - mean_).dot(g);
    }

private:
    Eigen::Vector2d mean_;
    Eigen::Matrix2d prec_;
};

inference::Chains column(const std::vector<inference::ChainResult>& res, int col) {
    inference::Chains c;
    for (const auto& r : res) {
        std::vector<double> v(r.draws.rows());
        for (int i = 0; i < r.draws.rows(); ++i) v[i] = r.draws(i, col);
        c.push_back(std::move(v));
    }
    return c;
}

std::vector<double> flat(const inference::Chains& c) {
    std::vector<double> v;
    for (const auto& ch : c) v.insert(v.end(), ch.begin(), ch.end());
    return v;
}

double sample_var(const std::vector<double>& v) {
    const double m = average(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

// 5. Conjugate normal mean and a correlated 2-d normal.
Outcome criterion5() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N(1.5, 1.0);
    std::vector<double> y(20);
    double sum = 0.0;
    for (auto& v : y) sum += (v = N(rng));
    const double prec = 20.0 + 0.01;
    const double pm = sum / prec, psd = 1.0 / std::sqrt(prec);
    inference::SamplerConfig cfg;
    cfg.seed = 5;
    const auto res = inference::nuts_sample(NormalMean(y), cfg);
    const auto c = column(res, 0);
    const auto v = flat(c);
    const double ess = inference::ess_bulk(c);
    std::vector<double> sq(v.size());
    const double vm = average(v);
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - vm) * (v[i] - vm);
    inference::Chains csq;
    std::size_t at = 0;
    for (const auto& ch : c) {
        csq.emplace_back(sq.begin() + at, sq.begin() + at + ch.size());
        at += ch.size();
    }
    const double ess_sq = inference::ess_bulk(csq);
    const double sd = std::sqrt(sample_var(v));
    const double z_mean = std::abs(vm - pm) / (psd / std::sqrt(ess));
    // se(var) = sd(squared deviations) / sqrt(ess); delta method for the sd.
    const double se_sd = std::sqrt(sample_var(sq)) / std::sqrt(ess_sq) / (2.0 * sd);
    const double z_sd = std::abs(sd - psd) / se_sd;

    Eigen::Matrix2d S;
    S << 1.0, 0.9, 0.9, 2.0;
    inference::SamplerConfig c2;
    c2.seed = 13;
    c2.samples = kCovSamplesPerChain;
    const auto r2 = inference::nuts_sample(Gaussian2(Eigen::Vector2d(1.0, -1.0), S), c2);
    const auto a = flat(column(r2, 0)), b = flat(column(r2, 1));
    const double ma = average(a), mb = average(b);
    double cab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) cab += (a[i] - ma) * (b[i] - mb);
    cab /= static_cast<double>(a.size() - 1);
    const double cov_err = std::max({std::abs(sample_var(a) / 1.0 - 1.0), std::abs(sample_var(b) / 2.0 - 1.0),
                                     std::abs(cab / 0.9 - 1.0)});
    const double secs = seconds_since(t0);
    return {z_mean < kCalibMcse && z_sd < kCalibMcse && cov_err < kCovRelErr && secs < kCalibSeconds,
            fmt::format("normal mean: |z| mean {:.2f}, sd {:.2f} < {} (4x1000 draws); 2-d covariance max rel err "
                        "{:.4f} < {} (4x{} draws); {:.1f} s",
                        z_mean, z_sd, kCalibMcse, cov_err, kCovRelErr, kCovSamplesPerChain, secs)};
}

cli::ExperimentSettings experiment_settings() {
    cli::ExperimentSettings s;
    s.seed = 1;
    s.lfo = false;
    return s;
}

std::string failed_cells(const std::vector<cli::CellResult>& rs) {
    std::string out;
    for (const auto& r : rs)
        if (!r.ok) out += fmt::format(" [{} p={} rep={}: {}]", r.cell.prior, r.cell.p, r.cell.rep, r.error);
    return out;
}

// 6. AR lag-order experiment on the Minnesota AR(8) process.
Outcome criterion6() {
    const auto t0 = Clock::now();
    const auto settings = experiment_settings();
    const std::vector<std::string> priors = {"arr2-minnesota", "minnesota", "rhs", "gaussian"};
    std::map<std::string, std::map<int, std::vector<double>>> rmse;
    std::vector<cli::CellResult> all;
    for (int rep = 0; rep < kArReps; ++rep) {
        for (int p : {9, 30}) {
            for (const auto& prior : priors) {
                cli::CellSpec c;
                c.dgp = "minnesota";
                c.p = p;
                c.prior = prior;
                c.rep = rep;
                auto r = cli::run_cell(c, settings);
                rmse[prior][p].push_back(r.ok ? r.rmse_phi : NAN);
                all.push_back(std::move(r));
            }
        }
    }
    int wins = 0;
    for (int rep = 0; rep < kArReps; ++rep) wins += rmse["arr2-minnesota"][30][rep] < rmse["gaussian"][30][rep];
    bool flat_in_p = true;
    std::string ratios;
    for (const char* prior : {"arr2-minnesota", "minnesota", "rhs"}) {
        const double r = average(rmse[prior][30]) / average(rmse[prior][9]);
        flat_in_p = flat_in_p && r <= kArLagRatio;
        ratios += fmt::format(" {} {:.2f}", prior, r);
    }
    const double secs = seconds_since(t0);
    const std::string bad = failed_cells(all);
    return {wins >= kArWinsNeeded && flat_in_p && bad.empty() && secs <= kArSeconds,
            fmt::format("ARR2 beats Gaussian at p=30 in {}/{} reps (need {}); mean RMSE p30/p9:{} (<= {}); "
                        "gaussian p30 mean {:.4f} vs arr2 {:.4f}; {:.0f} s{}",
                        wins, kArReps, kArWinsNeeded, ratios, kArLagRatio, average(rmse["gaussian"][30]),
                        average(rmse["arr2-minnesota"][30]), secs, bad)};
}

// 7. LTX state scale recovery at sigma_delta = 0.1.
Outcome criterion7() {
    const auto t0 = Clock::now();
    const auto settings = experiment_settings();
    const std::vector<std::string> priors = {"arr2-deterministic", "gaussian", "minnesota", "rhs"};
    std::map<std::string, std::vector<double>> err;
    std::vector<cli::CellResult> all;
    for (int rep = 0; rep < kLtxReps; ++rep) {
        for (const auto& prior : priors) {
            cli::CellSpec c;
            c.dgp = "ltx";
            c.m = 5;
            c.state_scale = 0.1;
            c.prior = prior;
            c.rep = rep;
            auto r = cli::run_cell(c, settings);
            err[prior].push_back(r.ok ? r.rmse_sigma_delta : NAN);
            all.push_back(std::move(r));
        }
    }
    const double ours = median(err["arr2-deterministic"]);
    bool pass = true;
    std::string detail = fmt::format("median |E[sigma_delta] - 0.1|: arr2-deterministic {:.4f}", ours);
    for (const char* b : {"gaussian", "minnesota", "rhs"}) {
        const double m = median(err[b]);
        pass = pass && ours < m;
        detail += fmt::format(", {} {:.4f}", b, m);
    }
    const double secs = seconds_since(t0);
    const std::string bad = failed_cells(all);
    return {pass && bad.empty() && secs <= kLtxSeconds,
            fmt::format("{} (baselines use the N(0,3) state scale); {} reps; {:.0f} s{}", detail, kLtxReps, secs, bad)};
}

// 8. Frozen single-draw LFO equals the hand-summed one-step densities.
Outcome criterion8() {
    Rng rng(8);
    dgp::ArDgp g;
    g.phi = {0.5, -0.2};
    g.T = 200;
    const auto sim = dgp::simulate_ar(g, rng);
    const int L = 100;
    ModelSpec s = spec_of(Family::AR, 2, 0, 1, PriorKind::Gaussian);
    Model m(s, sim.data.head(L));
    std::vector<double> x(m.constrained_dim(), 0.0);
    x[m.offsets().phi] = 0.45;
    x[m.offsets().phi + 1] = -0.15;
    x[m.offsets().sigma] = 1.1;
    const auto r = eval::elpd_lfo_frozen(eval::FoldPosterior{m, {x}}, sim.data, L, 1);
    double hand = 0.0;
    for (int t = L; t < sim.data.T(); ++t) {
        const double mu = 0.45 * sim.data.y[t - 1] - 0.15 * sim.data.y[t - 2];
        const double z = (sim.data.y[t] - mu) / 1.1;
        hand += -0.5 * std::log(2.0 * M_PI) - std::log(1.1) - 0.5 * z * z;
    }
    const int folds = sim.data.T() - L;
    const double err = std::abs(r.total - hand);
    const bool exact = r.mlpd() == r.total / static_cast<double>(folds) && r.n_scored == folds;
    return {err < kLfoAbsErr && exact,
            fmt::format("|elpd - hand sum| = {:.2e} < {:.0e}; {} folds; MLPD = total/(T-L) exactly: {}", err, kLfoAbsErr,
                        r.n_scored, exact ? "yes" : "no")};
}

// 9. Relative R2 with the shared conditional variance equals phi_i^2.
Outcome criterion9() {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-0.9, 0.9);
    double worst = 0.0;
    int tried = 0;
    for (int t = 0; t < 500 && tried < 200; ++t) {
        const int p = 1 + t % 8;
        // Stationary phi from uniform partial autocorrelations (step-up).
        std::vector<double> phi;
        for (int k = 0; k < p; ++k) {
            const double r = U(rng);
            std::vector<double> next(k + 1);
            for (int j = 0; j < k; ++j) next[j] = phi[j] - r * phi[k - 1 - j];
            next[k] = r;
            phi = next;
        }
        const double s2 = 0.5 + (t % 3);
        const auto S = companion_covariance(phi, s2);
        const auto rel = eval::relative_r2_conditional(phi, s2);
        for (int i = 0; i < p; ++i) {
            // var(phi_i y_{t-i}) over the shared variance var(y_t).
            const double share = phi[i] * phi[i] * S(i, i) / S(0, 0);
            worst = std::max({worst, std::abs(share - phi[i] * phi[i]), std::abs(rel[i] - phi[i] * phi[i])});
        }
        // The last coefficient is the lag-p partial autocorrelation.
        std::vector<double> gamma(p + 1);
        for (int k = 0; k < p; ++k) gamma[k] = S(0, k);
        gamma[p] = 0.0;
        for (int i = 0; i < p; ++i) gamma[p] += phi[i] * gamma[p - 1 - i];
        const auto pacf = ts::partial_autocorrelations(gamma);
        worst = std::max(worst, std::abs(pacf[p - 1] * pacf[p - 1] - phi[p - 1] * phi[p - 1]));
        ++tried;
    }
    return {worst < kRelR2AbsErr,
            fmt::format("max |share - phi_i^2| {:.2e} < {:.0e} over {} stationary AR(1..8)", worst, kRelR2AbsErr, tried)};
}

int run_cli(const std::string& args, const fs::path& dir) {
    const std::string cmd =
        "cd '" + dir.string() + "' && '" + ARR2_CLI_PATH + "' " + args + " >> cli.log 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 10. Every command reproduces its outputs byte for byte, whatever the job count.
Outcome criterion10() {
    const fs::path root = fs::temp_directory_path() / "arr2_acceptance_det";
    fs::remove_all(root);
    const std::vector<std::string> commands = {
        "simulate --dgp minnesota --T 120 --seed 3 --out ar.csv",
        "simulate --dgp ltx --state-scale 0.5 --m 5 --T 80 --out ltx.csv",
        "fit --data ar.csv --p 4 --prior rhs --chains 2 --warmup 300 --samples 300 --allow-nonconverged --out fit.csv",
        "diagnose --draws fit.csv --out fit_diag.json",
        "prior-check --prior arr2-flat --draws 5000 --out pc.csv",
        "experiment --dgp minnesota --p 2,4 --reps 2 --priors arr2,gaussian --chains 2 --warmup 150 --samples 150 "
        "--lfo-chains 1 --lfo-warmup 100 --lfo-samples 100 --lfo-stride 30 --out exp.csv",
    };
    int files = 0;
    std::string problems;
    std::vector<fs::path> dirs = {root / "a", root / "b"};
    for (std::size_t k = 0; k < dirs.size(); ++k) {
        fs::create_directories(dirs[k]);
        for (const auto& c : commands) {
            const int code = run_cli(c + (k ? " --jobs 2" : " --jobs 1"), dirs[k]);
            if (code != 0) problems += fmt::format(" [exit {} for '{}']", code, c);
        }
    }
    for (const auto& e : fs::directory_iterator(dirs[0])) {
        const auto name = e.path().filename();
        if (name == "cli.log") continue;
        ++files;
        if (!fs::exists(dirs[1] / name) || slurp(e.path()) != slurp(dirs[1] / name))
            problems += " [" + name.string() + " differs]";
    }
    return {problems.empty() && files >= 12,
            fmt::format("{} output files identical across reruns (jobs 1 vs 2){}", files, problems)};
}

}  // namespace

// Optional arguments restrict the run to the listed criterion numbers.
int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
        {"prior push-forward exactness", criterion1},
        {"Gaussian-prior non-stationarity", criterion2},
        {"Yule-Walker oracle", criterion3},
        {"gradient correctness", criterion4},
        {"sampler calibration", criterion5},
        {"AR directional replication", criterion6},
        {"LTX state-scale recovery", criterion7},
        {"LFO bookkeeping", criterion8},
        {"relative-R2 identity", criterion9},
        {"determinism", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (!only.empty() && !only.count(static_cast<int>(i) + 1)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        fmt::print("{} {:2d} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
