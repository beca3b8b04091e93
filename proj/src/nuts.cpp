#include "arr2/nuts.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace arr2::inference {

void SamplerConfig::validate() const {
    if (chains < 1) throw std::invalid_argument("chains must be >= 1");
    if (warmup < 0) throw std::invalid_argument("warmup must be >= 0");
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (!(target_accept > 0.0 && target_accept < 1.0)) throw std::invalid_argument("target_accept must lie in (0, 1)");
    if (max_treedepth < 1) throw std::invalid_argument("max_treedepth must be >= 1");
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
    if (!(init_radius > 0.0)) throw std::invalid_argument("init_radius must be positive");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_sum_exp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct Point {
    Eigen::VectorXd q;
    Eigen::VectorXd p;
    Eigen::VectorXd grad;
    double logp = -kInf;
};

/// Welford accumulator for the diagonal metric.
class VarianceEstimator {
public:
    explicit VarianceEstimator(int n) : mean_(Eigen::VectorXd::Zero(n)), m2_(Eigen::VectorXd::Zero(n)) {}
    void restart() {
        n_ = 0;
        mean_.setZero();
        m2_.setZero();
    }
    void add(const Eigen::VectorXd& q) {
        ++n_;
        const Eigen::VectorXd d = q - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d.cwiseProduct(q - mean_);
    }
    [[nodiscard]] int count() const noexcept { return n_; }
    [[nodiscard]] Eigen::VectorXd variance() const { return m2_ / (n_ - 1.0); }

private:
    int n_ = 0;
    Eigen::VectorXd mean_;
    Eigen::VectorXd m2_;
};

class DualAveraging {
public:
    void set_mu(double mu) { mu_ = mu; }
    void restart() {
        counter_ = 0;
        s_bar_ = 0.0;
        x_bar_ = 0.0;
    }
    double learn(double adapt_stat, double delta) {
        ++counter_;
        adapt_stat = std::min(1.0, adapt_stat);
        const double eta = 1.0 / (counter_ + kT0);
        s_bar_ = (1.0 - eta) * s_bar_ + eta * (delta - adapt_stat);
        const double x = mu_ - s_bar_ * std::sqrt(static_cast<double>(counter_)) / kGamma;
        const double x_eta = std::pow(static_cast<double>(counter_), -kKappa);
        x_bar_ = (1.0 - x_eta) * x_bar_ + x_eta * x;
        return std::exp(x);
    }
    [[nodiscard]] double final_stepsize() const { return std::exp(x_bar_); }

private:
    static constexpr double kGamma = 0.05;
    static constexpr double kKappa = 0.75;
    static constexpr double kT0 = 10.0;
    double mu_ = std::log(10.0);
    double counter_ = 0;
    double s_bar_ = 0.0;
    double x_bar_ = 0.0;
};

/// Fast/slow/fast warmup schedule with doubling slow windows.
class WindowSchedule {
public:
    explicit WindowSchedule(int warmup) : warmup_(warmup) {
        if (warmup < 20) {
            active_ = false;
            return;
        }
        if (init_buffer_ + base_window_ + term_buffer_ > warmup) {
            init_buffer_ = static_cast<int>(0.15 * warmup);
            term_buffer_ = static_cast<int>(0.1 * warmup);
            base_window_ = warmup - (init_buffer_ + term_buffer_);
        }
        window_size_ = base_window_;
        next_window_ = init_buffer_ + window_size_ - 1;
    }

    [[nodiscard]] bool active() const noexcept { return active_; }

    /// Records iteration `q`; returns true when a slow window closes and the metric should update.
    bool step(const Eigen::VectorXd& q, VarianceEstimator& est, Eigen::VectorXd& inv_metric) {
        if (!active_) return false;
        if (in_window()) est.add(q);
        if (counter_ == next_window_ && counter_ != warmup_) {
            compute_next_window();
            const double n = est.count();
            inv_metric = (n / (n + 5.0)) * est.variance().array() + 1e-3 * (5.0 / (n + 5.0));
            est.restart();
            ++counter_;
            return true;
        }
        ++counter_;
        return false;
    }

private:
    [[nodiscard]] bool in_window() const {
        return counter_ >= init_buffer_ && counter_ < warmup_ - term_buffer_ && counter_ != warmup_;
    }
    void compute_next_window() {
        if (next_window_ == warmup_ - term_buffer_ - 1) return;
        window_size_ *= 2;
        next_window_ = counter_ + window_size_;
        if (next_window_ != warmup_ - term_buffer_ - 1) {
            const int boundary = next_window_ + 2 * window_size_;
            if (boundary >= warmup_ - term_buffer_) next_window_ = warmup_ - term_buffer_ - 1;
        }
    }

    int warmup_;
    bool active_ = true;
    int init_buffer_ = 75;
    int term_buffer_ = 50;
    int base_window_ = 25;
    int window_size_ = 25;
    int next_window_ = 0;
    int counter_ = 0;
};

class Nuts {
public:
    Nuts(const LogDensity& target, const SamplerConfig& cfg, Rng& rng)
        : target_(target), cfg_(cfg), rng_(rng), n_(target.dim()), inv_metric_(Eigen::VectorXd::Ones(n_)) {}

    void evaluate(Point& z) const {
        z.grad.resize(n_);
        double lp;
        try {
            lp = target_.log_density_gradient({z.q.data(), static_cast<std::size_t>(n_)},
                                              {z.grad.data(), static_cast<std::size_t>(n_)});
        } catch (const std::domain_error&) {
            lp = -kInf;
        }
        if (!std::isfinite(lp) || !z.grad.allFinite()) lp = -kInf;
        z.logp = lp;
    }

    [[nodiscard]] double hamiltonian(const Point& z) const {
        if (z.logp == -kInf) return kInf;
        return -z.logp + 0.5 * z.p.cwiseProduct(inv_metric_).dot(z.p);
    }

    void sample_momentum(Point& z) {
        z.p.resize(n_);
        for (int i = 0; i < n_; ++i) z.p(i) = normal_(rng_) / std::sqrt(inv_metric_(i));
    }

    [[nodiscard]] Eigen::VectorXd p_sharp(const Point& z) const { return inv_metric_.cwiseProduct(z.p); }

    void leapfrog(Point& z, double eps) const {
        z.p += 0.5 * eps * z.grad;
        z.q += eps * inv_metric_.cwiseProduct(z.p);
        evaluate(z);
        if (z.logp != -kInf) z.p += 0.5 * eps * z.grad;
    }

    double uniform() { return unif_(rng_); }

    void init_stepsize(Point& z) {
        const Point z0 = z;
        sample_momentum(z);
        double h0 = hamiltonian(z);
        leapfrog(z, epsilon_);
        double delta_h = h0 - hamiltonian(z);
        const int direction = delta_h > std::log(0.8) ? 1 : -1;
        for (;;) {
            z = z0;
            sample_momentum(z);
            h0 = hamiltonian(z);
            leapfrog(z, epsilon_);
            delta_h = h0 - hamiltonian(z);
            if (std::isnan(delta_h)) delta_h = -kInf;
            if (direction == 1 && !(delta_h > std::log(0.8))) break;
            if (direction == -1 && !(delta_h < std::log(0.8))) break;
            epsilon_ = direction == 1 ? 2.0 * epsilon_ : 0.5 * epsilon_;
            if (epsilon_ > 1e7) throw std::runtime_error("step size search diverged: posterior may be improper");
            if (epsilon_ == 0.0) throw std::runtime_error("step size search collapsed to zero");
        }
        z = z0;
    }

    struct TransitionInfo {
        double accept_stat = 0.0;
        int depth = 0;
        int n_leapfrog = 0;
        bool divergent = false;
        double energy = 0.0;
    };

    TransitionInfo transition(Point& z) {
        sample_momentum(z);
        divergent_ = false;
        Point z_fwd = z;
        Point z_bck = z;
        Point z_sample = z;
        Point z_propose = z;

        Eigen::VectorXd p_fwd_fwd = z.p, p_fwd_bck = z.p, p_bck_fwd = z.p, p_bck_bck = z.p;
        const Eigen::VectorXd ps = p_sharp(z);
        Eigen::VectorXd ps_fwd_fwd = ps, ps_fwd_bck = ps, ps_bck_fwd = ps, ps_bck_bck = ps;
        Eigen::VectorXd rho = z.p;
        double log_sum_weight = 0.0;
        const double h0 = hamiltonian(z);
        int n_leapfrog = 0;
        double sum_metro = 0.0;
        int depth = 0;

        Point cur = z;
        while (depth < cfg_.max_treedepth) {
            Eigen::VectorXd rho_fwd = Eigen::VectorXd::Zero(n_);
            Eigen::VectorXd rho_bck = Eigen::VectorXd::Zero(n_);
            bool valid = false;
            double lsw_subtree = -kInf;
            if (uniform() > 0.5) {
                cur = z_fwd;
                rho_bck = rho;
                p_bck_fwd = p_fwd_bck;
                ps_bck_fwd = ps_fwd_bck;
                valid = build_tree(depth, cur, z_propose, ps_fwd_bck, ps_fwd_fwd, rho_fwd, p_fwd_bck, p_fwd_fwd, h0, 1.0,
                                   n_leapfrog, lsw_subtree, sum_metro);
                z_fwd = cur;
            } else {
                cur = z_bck;
                rho_fwd = rho;
                p_fwd_bck = p_bck_fwd;
                ps_fwd_bck = ps_bck_fwd;
                valid = build_tree(depth, cur, z_propose, ps_bck_fwd, ps_bck_bck, rho_bck, p_bck_fwd, p_bck_bck, h0, -1.0,
                                   n_leapfrog, lsw_subtree, sum_metro);
                z_bck = cur;
            }
            if (!valid) break;
            ++depth;
            if (lsw_subtree > log_sum_weight) {
                z_sample = z_propose;
            } else if (uniform() < std::exp(lsw_subtree - log_sum_weight)) {
                z_sample = z_propose;
            }
            log_sum_weight = log_sum_exp(log_sum_weight, lsw_subtree);
            rho = rho_bck + rho_fwd;
            bool persist = criterion(ps_bck_bck, ps_fwd_fwd, rho);
            persist = persist && criterion(ps_bck_bck, ps_fwd_bck, rho_bck + p_fwd_bck);
            persist = persist && criterion(ps_bck_fwd, ps_fwd_fwd, rho_fwd + p_bck_fwd);
            if (!persist) break;
        }
        TransitionInfo info;
        info.depth = depth;
        info.n_leapfrog = n_leapfrog;
        info.accept_stat = n_leapfrog > 0 ? sum_metro / n_leapfrog : 0.0;
        info.divergent = divergent_;
        z = z_sample;
        info.energy = hamiltonian(z);
        return info;
    }

    double epsilon_ = 1.0;
    Eigen::VectorXd& inv_metric() { return inv_metric_; }

private:
    static bool criterion(const Eigen::VectorXd& ps_minus, const Eigen::VectorXd& ps_plus, const Eigen::VectorXd& rho) {
        return ps_plus.dot(rho) > 0.0 && ps_minus.dot(rho) > 0.0;
    }

    bool build_tree(int depth, Point& z, Point& z_propose, Eigen::VectorXd& ps_beg, Eigen::VectorXd& ps_end,
                    Eigen::VectorXd& rho, Eigen::VectorXd& p_beg, Eigen::VectorXd& p_end, double h0, double sign,
                    int& n_leapfrog, double& log_sum_weight, double& sum_metro) {
        if (depth == 0) {
            leapfrog(z, sign * epsilon_);
            ++n_leapfrog;
            double h = hamiltonian(z);
            if (std::isnan(h)) h = kInf;
            if (h - h0 > kMaxDeltaH) divergent_ = true;
            log_sum_weight = log_sum_exp(log_sum_weight, h0 - h);
            sum_metro += h0 - h > 0.0 ? 1.0 : std::exp(h0 - h);
            z_propose = z;
            ps_beg = p_sharp(z);
            ps_end = ps_beg;
            rho += z.p;
            p_beg = z.p;
            p_end = p_beg;
            return !divergent_;
        }
        double lsw_init = -kInf;
        Eigen::VectorXd p_init_end(n_), ps_init_end(n_);
        Eigen::VectorXd rho_init = Eigen::VectorXd::Zero(n_);
        if (!build_tree(depth - 1, z, z_propose, ps_beg, ps_init_end, rho_init, p_beg, p_init_end, h0, sign, n_leapfrog,
                        lsw_init, sum_metro)) {
            return false;
        }
        Point z_propose_final = z;
        double lsw_final = -kInf;
        Eigen::VectorXd p_final_beg(n_), ps_final_beg(n_);
        Eigen::VectorXd rho_final = Eigen::VectorXd::Zero(n_);
        if (!build_tree(depth - 1, z, z_propose_final, ps_final_beg, ps_end, rho_final, p_final_beg, p_end, h0, sign,
                        n_leapfrog, lsw_final, sum_metro)) {
            return false;
        }
        const double lsw_subtree = log_sum_exp(lsw_init, lsw_final);
        log_sum_weight = log_sum_exp(log_sum_weight, lsw_subtree);
        if (lsw_final > lsw_subtree) {
            z_propose = z_propose_final;
        } else if (uniform() < std::exp(lsw_final - lsw_subtree)) {
            z_propose = z_propose_final;
        }
        const Eigen::VectorXd rho_subtree = rho_init + rho_final;
        rho += rho_subtree;
        bool persist = criterion(ps_beg, ps_end, rho_subtree);
        persist = persist && criterion(ps_beg, ps_final_beg, rho_init + p_final_beg);
        persist = persist && criterion(ps_init_end, ps_end, rho_final + p_init_end);
        return persist;
    }

    const LogDensity& target_;
    const SamplerConfig& cfg_;
    Rng& rng_;
    int n_;
    Eigen::VectorXd inv_metric_;
    bool divergent_ = false;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

}  // namespace

ChainResult nuts_chain(const LogDensity& target, const SamplerConfig& cfg, int chain, std::optional<Eigen::VectorXd> init) {
    cfg.validate();
    const int n = target.dim();
    Rng rng(cfg.seed + static_cast<std::uint64_t>(chain));
    Nuts nuts(target, cfg, rng);

    Point z;
    if (init) {
        z.q = *init;
        nuts.evaluate(z);
        if (z.logp == -kInf) throw std::runtime_error("supplied initial point has zero density");
    } else {
        std::uniform_real_distribution<double> u(-cfg.init_radius, cfg.init_radius);
        int attempt = 0;
        for (; attempt < cfg.init_attempts; ++attempt) {
            z.q.resize(n);
            for (int i = 0; i < n; ++i) z.q(i) = u(rng);
            nuts.evaluate(z);
            if (z.logp != -kInf) break;
        }
        if (attempt == cfg.init_attempts) {
            throw std::runtime_error("chain " + std::to_string(chain) + ": no finite log density after " +
                                     std::to_string(cfg.init_attempts) + " initialisation attempts");
        }
    }

    ChainResult out;
    if (n == 0) {
        out.draws.resize(cfg.samples, 0);
        out.divergent.assign(cfg.samples, 0);
        out.energy.assign(cfg.samples, -z.logp);
        out.accept_stat.assign(cfg.samples, 1.0);
        out.treedepth.assign(cfg.samples, 0);
        out.n_leapfrog.assign(cfg.samples, 0);
        out.inv_metric = Eigen::VectorXd();
        return out;
    }

    nuts.init_stepsize(z);
    DualAveraging da;
    da.set_mu(std::log(10.0 * nuts.epsilon_));
    da.restart();
    WindowSchedule schedule(cfg.warmup);
    VarianceEstimator est(n);

    for (int it = 0; it < cfg.warmup; ++it) {
        const auto info = nuts.transition(z);
        if (info.divergent) ++out.warmup_divergences;
        nuts.epsilon_ = da.learn(info.accept_stat, cfg.target_accept);
        if (schedule.step(z.q, est, nuts.inv_metric())) {
            nuts.init_stepsize(z);
            da.set_mu(std::log(10.0 * nuts.epsilon_));
            da.restart();
        }
    }
    if (cfg.warmup > 0) nuts.epsilon_ = da.final_stepsize();

    out.draws.resize(cfg.samples, n);
    out.divergent.resize(cfg.samples);
    out.energy.resize(cfg.samples);
    out.accept_stat.resize(cfg.samples);
    out.treedepth.resize(cfg.samples);
    out.n_leapfrog.resize(cfg.samples);
    for (int it = 0; it < cfg.samples; ++it) {
        const auto info = nuts.transition(z);
        out.draws.row(it) = z.q.transpose();
        out.divergent[it] = info.divergent ? 1 : 0;
        out.energy[it] = info.energy;
        out.accept_stat[it] = info.accept_stat;
        out.treedepth[it] = info.depth;
        out.n_leapfrog[it] = info.n_leapfrog;
    }
    out.stepsize = nuts.epsilon_;
    out.inv_metric = nuts.inv_metric();
    return out;
}

std::vector<ChainResult> nuts_sample(const LogDensity& target, const SamplerConfig& cfg) {
    cfg.validate();
    std::vector<ChainResult> results(cfg.chains);
    if (cfg.jobs <= 1 || cfg.chains == 1) {
        for (int c = 0; c < cfg.chains; ++c) results[c] = nuts_chain(target, cfg, c);
        return results;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex mu;
    auto worker = [&] {
        for (int c = next++; c < cfg.chains; c = next++) {
            try {
                results[c] = nuts_chain(target, cfg, c);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < std::min(cfg.jobs, cfg.chains); ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

}  // namespace arr2::inference
