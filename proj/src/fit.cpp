#include "arr2/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "arr2/ad.hpp"

namespace arr2::inference {

GradResult grad_logposterior(const models::Model& model, std::span<const double> u) {
    GradResult r;
    r.gradient.assign(u.size(), 0.0);
    ad::TapeScope scope;
    std::vector<ad::Var> v;
    v.reserve(u.size());
    for (double x : u) v.push_back(ad::Var::independent(x));
    const ad::Var lp = model.log_density(std::span<const ad::Var>(v));
    r.logdensity = lp.val();
    if (!std::isfinite(r.logdensity)) {
        r.finite = false;
        r.logdensity = -std::numeric_limits<double>::infinity();
        return r;
    }
    if (lp.is_constant()) return r;
    ad::tape().backward(lp.index());
    for (std::size_t i = 0; i < v.size(); ++i) r.gradient[i] = ad::tape().adjoint(v[i].index());
    return r;
}

double ModelDensity::log_density_gradient(std::span<const double> u, std::span<double> grad) const {
    const GradResult r = grad_logposterior(model_, u);
    std::copy(r.gradient.begin(), r.gradient.end(), grad.begin());
    return r.logdensity;
}

int DrawsMatrix::col(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::invalid_argument("no parameter named '" + name + "' in draws");
    return static_cast<int>(it - names.begin());
}

bool DrawsMatrix::has(const std::string& name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

Chains DrawsMatrix::chains_of(int c) const {
    Chains out(chains, std::vector<double>(per_chain));
    for (int j = 0; j < chains; ++j) {
        for (int i = 0; i < per_chain; ++i) out[j][i] = values(j * per_chain + i, c);
    }
    return out;
}

std::vector<double> DrawsMatrix::row(int r) const {
    std::vector<double> out(values.cols());
    for (Eigen::Index c = 0; c < values.cols(); ++c) out[c] = values(r, c);
    return out;
}

std::vector<std::vector<double>> DrawsMatrix::all_rows() const {
    std::vector<std::vector<double>> out;
    out.reserve(rows());
    for (int r = 0; r < rows(); ++r) out.push_back(row(r));
    return out;
}

double DrawsMatrix::mean(int c) const { return values.col(c).mean(); }

Diagnostics diagnose(const DrawsMatrix& draws) {
    Diagnostics d;
    d.total_draws = draws.rows();
    for (auto v : draws.divergent) d.divergences += v;
    const bool enough = draws.chains >= 2 && draws.per_chain >= 4;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    d.max_rhat = 1.0;
    d.min_ess_bulk = std::numeric_limits<double>::infinity();
    d.min_ess_tail = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < draws.names.size(); ++c) {
        ParamSummary p;
        p.name = draws.names[c];
        const Eigen::VectorXd col = draws.values.col(static_cast<Eigen::Index>(c));
        std::vector<double> all(col.data(), col.data() + col.size());
        p.mean = col.mean();
        p.sd = col.size() > 1 ? std::sqrt((col.array() - p.mean).square().sum() / (col.size() - 1.0)) : 0.0;
        p.q05 = quantile(all, 0.05);
        p.q50 = quantile(all, 0.5);
        p.q95 = quantile(all, 0.95);
        if (enough) {
            const Chains ch = draws.chains_of(static_cast<int>(c));
            p.rhat = split_rhat(ch);
            const bool constant = std::isnan(p.rhat);
            p.ess_bulk = constant ? nan : ess_bulk(ch);
            p.ess_tail = constant ? nan : ess_tail(ch);
            if (!constant) {
                d.max_rhat = std::max(d.max_rhat, p.rhat);
                if (!std::isnan(p.ess_bulk)) d.min_ess_bulk = std::min(d.min_ess_bulk, p.ess_bulk);
                if (!std::isnan(p.ess_tail)) d.min_ess_tail = std::min(d.min_ess_tail, p.ess_tail);
            }
        } else {
            p.rhat = p.ess_bulk = p.ess_tail = nan;
        }
        d.params.push_back(p);
    }
    if (!enough) d.max_rhat = d.min_ess_bulk = d.min_ess_tail = nan;
    return d;
}

FitResult fit(const models::Model& model, const SamplerConfig& cfg) {
    const ModelDensity target(model);
    const std::vector<ChainResult> chains = nuts_sample(target, cfg);
    FitResult out;
    DrawsMatrix& dm = out.draws;
    dm.names = model.names();
    dm.chains = cfg.chains;
    dm.per_chain = cfg.samples;
    dm.values.resize(static_cast<Eigen::Index>(cfg.chains) * cfg.samples, static_cast<Eigen::Index>(dm.names.size()));
    double mmin = std::numeric_limits<double>::infinity();
    double mmax = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < cfg.chains; ++c) {
        const ChainResult& ch = chains[c];
        for (int i = 0; i < cfg.samples; ++i) {
            const Eigen::VectorXd u = ch.draws.row(i).transpose();
            const std::vector<double> x = model.to_constrained({u.data(), static_cast<std::size_t>(u.size())});
            for (std::size_t k = 0; k < x.size(); ++k) dm.values(c * cfg.samples + i, static_cast<Eigen::Index>(k)) = x[k];
        }
        dm.divergent.insert(dm.divergent.end(), ch.divergent.begin(), ch.divergent.end());
        dm.energy.insert(dm.energy.end(), ch.energy.begin(), ch.energy.end());
        dm.accept_stat.insert(dm.accept_stat.end(), ch.accept_stat.begin(), ch.accept_stat.end());
        dm.treedepth.insert(dm.treedepth.end(), ch.treedepth.begin(), ch.treedepth.end());
        out.diagnostics.stepsizes.push_back(ch.stepsize);
        if (ch.inv_metric.size() > 0) {
            mmin = std::min(mmin, ch.inv_metric.minCoeff());
            mmax = std::max(mmax, ch.inv_metric.maxCoeff());
        }
    }
    const auto steps = out.diagnostics.stepsizes;
    out.diagnostics = diagnose(dm);
    out.diagnostics.stepsizes = steps;
    out.diagnostics.inv_metric_min = mmin;
    out.diagnostics.inv_metric_max = mmax;
    for (int d : dm.treedepth) out.diagnostics.max_treedepth_hits += d >= cfg.max_treedepth ? 1 : 0;
    return out;
}

}  // namespace arr2::inference
