#include "arr2/cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <CLI11.hpp>
#include <json.hpp>

#include "arr2/cli/csv_io.hpp"
#include "arr2/diagnostics.hpp"
#include "arr2/evaluation.hpp"
#include "arr2/fit.hpp"
#include "arr2/tsmath.hpp"

namespace arr2::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_ar_dgp(const std::string& d) { return d == "minnesota" || d == "oscillation" || d == "delayed"; }

/// jobs never changes results, so it stays out of the hashed config.
Config hashed(const Config& c) {
    Config h;
    for (const auto& [k, v] : c.values()) {
        if (k != "jobs") h.set(k, v);
    }
    return h;
}

std::vector<std::string> provenance(const std::string& command, const Config& c) {
    const Config h = hashed(c);
    return {fmt::format("arr2 {} config_hash={} seed={}", command, h.hash_hex(), c.has("seed") ? c.str("seed") : "-")};
}

void write_sidecar(const std::string& out, const Config& c) { write_text(out + ".config", hashed(c).to_text()); }

json stats_json(std::vector<double> v) {
    if (v.empty()) return json::object();
    double m = 0.0;
    for (double a : v) m += a;
    m /= static_cast<double>(v.size());
    return {{"mean", m}, {"q05", inference::quantile(v, 0.05)}, {"q50", inference::quantile(v, 0.5)},
            {"q95", inference::quantile(v, 0.95)}};
}

json diagnostics_json(const inference::Diagnostics& d) {
    json params = json::array();
    for (const auto& p : d.params) {
        params.push_back({{"name", p.name}, {"mean", p.mean}, {"sd", p.sd}, {"q05", p.q05}, {"q50", p.q50},
                          {"q95", p.q95}, {"rhat", p.rhat}, {"ess_bulk", p.ess_bulk}, {"ess_tail", p.ess_tail}});
    }
    return {{"divergences", d.divergences},
            {"total_draws", d.total_draws},
            {"max_rhat", d.max_rhat},
            {"min_ess_bulk", d.min_ess_bulk},
            {"min_ess_tail", d.min_ess_tail},
            {"max_treedepth_hits", d.max_treedepth_hits},
            {"stepsizes", d.stepsizes},
            {"inv_metric_min", d.inv_metric_min},
            {"inv_metric_max", d.inv_metric_max},
            {"params", params}};
}

std::string clean(std::string s) {
    for (char& ch : s) {
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    }
    return s;
}

std::vector<double> padded(std::vector<double> v, std::size_t n) {
    v.resize(std::max(v.size(), n), 0.0);
    return v;
}

}  // namespace

priors::PriorSpec prior_from_name(const std::string& name) {
    priors::PriorSpec p;
    if (name == "arr2" || name == "arr2-minnesota") {
        p.kind = priors::PriorKind::Arr2;
        p.arr2.scheme = "minnesota";
    } else if (name == "arr2-flat") {
        p.kind = priors::PriorKind::Arr2;
        p.arr2.scheme = "flat";
    } else if (name == "arr2-sparse") {
        p.kind = priors::PriorKind::Arr2;
        p.arr2.scheme = "sparse";
    } else if (name == "arr2-deterministic") {
        p.kind = priors::PriorKind::Arr2;
        p.arr2.scheme = "flat";
        p.arr2.group_weights = priors::LagWeights::Minnesota;
    } else if (name == "minnesota" || name == "rhs" || name == "gaussian") {
        p.kind = priors::prior_kind_from_string(name);
    } else {
        throw UserError("unknown prior '" + name +
                        "' (expected arr2, arr2-flat, arr2-minnesota, arr2-sparse, arr2-deterministic, minnesota, rhs or gaussian)");
    }
    return p;
}

models::ModelSpec model_spec_from(const Config& c) {
    models::ModelSpec s;
    try {
        s.family = models::family_from_string(c.str("family"));
    } catch (const std::invalid_argument& e) {
        throw UserError(e.what());
    }
    s.p = c.integer("p");
    s.q = c.integer("q");
    s.g = c.integer("g");
    s.prior = prior_from_name(c.str("prior"));
    if (c.has("mu-r2")) s.prior.arr2.mu_r2 = c.real("mu-r2");
    if (c.has("phi-r2")) s.prior.arr2.phi_r2 = c.real("phi-r2");
    if (c.has("xi-scale")) s.prior.arr2.exog_xi_scale = c.real("xi-scale");
    if (c.has("gaussian-sd")) s.prior.gaussian.sd = c.real("gaussian-sd");
    if (c.has("rhs-p0")) s.prior.rhs.p0 = c.real("rhs-p0");
    if (c.has("rhs-slab-df")) s.prior.rhs.slab_df = c.real("rhs-slab-df");
    if (c.has("rhs-slab-scale")) s.prior.rhs.slab_scale = c.real("rhs-slab-scale");
    if (c.has("state-phi-sd")) s.prior.state_phi_sd = c.real("state-phi-sd");
    if (c.has("state-scale-sd")) s.prior.state_scale_prior = dist::HalfNormal{c.real("state-scale-sd")};
    return s;
}

inference::SamplerConfig sampler_from(const Config& c) {
    inference::SamplerConfig s;
    s.chains = c.integer("chains");
    s.warmup = c.integer("warmup");
    s.samples = c.integer("samples");
    s.target_accept = c.real("target-accept");
    s.max_treedepth = c.integer("max-treedepth");
    s.seed = c.u64("seed");
    s.jobs = c.has("jobs") ? c.integer("jobs") : 1;
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw UserError(e.what());
    }
    return s;
}

std::uint64_t cell_data_seed(std::uint64_t master, const CellSpec& c) {
    return mix_seed(master, fmt::format("data/{}/m{}/rho{}/s{}/rep{}", c.dgp, c.m, c.rho, c.state_scale, c.rep));
}

std::uint64_t cell_fit_seed(std::uint64_t master, const CellSpec& c) {
    return mix_seed(master, fmt::format("fit/{}/m{}/rho{}/s{}/p{}/{}/rep{}", c.dgp, c.m, c.rho, c.state_scale, c.p,
                                        c.prior, c.rep));
}

dgp::Simulation simulate_cell(const CellSpec& c, const ExperimentSettings& s) {
    Rng rng(cell_data_seed(s.seed, c));
    if (is_ar_dgp(c.dgp)) {
        dgp::ArDgp d;
        d.phi = dgp::ar_phi_by_name(c.dgp);
        if (s.T > 0) d.T = s.T;
        return dgp::simulate_ar(d, rng);
    }
    if (c.dgp == "arx") {
        dgp::ArxDgp d;
        d.m = c.m;
        d.rho = c.rho;
        if (s.T > 0) d.T = s.T;
        return dgp::simulate_arx(d, rng);
    }
    if (c.dgp == "ltx") {
        dgp::LtxDgp d;
        d.m = c.m;
        d.rho = c.rho;
        d.sigma_delta = c.state_scale;
        d.lags = s.ltx_lags;
        if (s.T > 0) d.T = s.T;
        return dgp::simulate_ltx(d, rng);
    }
    throw UserError("unknown dgp '" + c.dgp + "' (expected minnesota, oscillation, delayed, arx or ltx)");
}

models::ModelSpec cell_model_spec(const CellSpec& c, const ExperimentSettings& s) {
    models::ModelSpec m;
    m.prior = prior_from_name(c.prior);
    if (is_ar_dgp(c.dgp)) {
        m.family = models::Family::AR;
        m.p = c.p;
    } else if (c.dgp == "arx") {
        m.family = models::Family::ARX;
        m.p = c.p;
    } else {
        m.family = models::Family::LTX;
        m.g = s.ltx_lags;
    }
    if (s.xi_adjust && !is_ar_dgp(c.dgp)) m.prior.arr2.exog_xi_scale = 1.0 / (1.0 + 4.0 * c.rho);
    return m;
}

CellResult run_cell(const CellSpec& c, const ExperimentSettings& s) {
    CellResult r;
    r.cell = c;
    r.data_seed = cell_data_seed(s.seed, c);
    r.fit_seed = cell_fit_seed(s.seed, c);
    r.rmse_phi = r.rmse_beta = r.rmse_state = r.rmse_sigma_delta = r.sigma_delta_mean = r.mlpd = kNaN;
    r.trend_share = r.trend_fraction = kNaN;
    try {
        const dgp::Simulation sim = simulate_cell(c, s);
        r.T = sim.data.T();
        const models::ModelSpec spec = cell_model_spec(c, s);
        const models::Model model(spec, sim.data);
        inference::SamplerConfig sc = s.sampler;
        sc.seed = r.fit_seed;
        const inference::FitResult f = inference::fit(model, sc);
        const auto& dm = f.draws;
        const auto& off = model.offsets();
        auto means = [&](int start, int n) {
            std::vector<double> v(n);
            for (int k = 0; k < n; ++k) v[k] = dm.mean(start + k);
            return v;
        };
        if (model.n_phi() > 0) {
            const std::size_t K = std::max<std::size_t>(model.n_phi(), sim.phi.size());
            r.rmse_phi = eval::rmse(padded(means(off.phi, model.n_phi()), K), padded(sim.phi, K));
        }
        if (model.n_beta() > 0 && !sim.beta.empty()) r.rmse_beta = eval::rmse(means(off.beta, model.n_beta()), sim.beta);
        const auto rows = dm.all_rows();
        if (model.has_state()) {
            r.rmse_state = eval::rmse(means(off.delta + 1, r.T), sim.delta);
            double sd = 0.0;
            for (const auto& x : rows) sd += model.state_phi_scale(std::span<const double>(x)).second;
            r.sigma_delta_mean = sd / static_cast<double>(rows.size());
            r.rmse_sigma_delta = std::abs(r.sigma_delta_mean - sim.sigma_delta);
        }
        const eval::R2Decomposition dec = eval::r2_decomposition(model, rows);
        r.r2_mean = eval::summarize(dec.bayes_r2).mean;
        if (model.has_state()) {
            const auto& names = dec.components;
            const auto it = std::find(names.begin(), names.end(), "trend");
            if (it != names.end()) {
                const auto k = static_cast<Eigen::Index>(it - names.begin());
                r.trend_share = dec.share.col(k).mean();
                r.trend_fraction = dec.fraction.col(k).mean();
            }
        }
        r.max_rhat = f.diagnostics.max_rhat;
        r.divergences = f.diagnostics.divergences;
        if (s.lfo) {
            eval::LfoConfig lc;
            lc.L = s.lfo_start > 0 ? s.lfo_start : r.T / 2;
            lc.M = 1;
            lc.stride = s.lfo_stride;
            lc.mode = eval::LfoMode::Refit;
            const eval::Fitter fitter = [&](const models::ModelSpec& ms, const TimeSeriesData& train)
                -> std::optional<eval::FoldPosterior> {
                models::Model fm(ms, train);
                inference::SamplerConfig lsc = s.lfo_sampler;
                lsc.seed = mix_seed(r.fit_seed, fmt::format("lfo/{}", train.T()));
                const inference::FitResult ff = inference::fit(fm, lsc);
                return eval::FoldPosterior{std::move(fm), ff.draws.all_rows()};
            };
            const eval::LfoResult lr = eval::elpd_lfo(spec, sim.data, lc, fitter);
            r.lfo_excluded = lr.n_excluded;
            r.mlpd = lr.n_scored > 0 ? lr.mlpd() : kNaN;
        }
        r.ok = true;
    } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
    }
    return r;
}

Config defaults_for(const std::string& command) {
    Config c;
    const char* env = std::getenv("ARR2_JOBS");
    c.set("jobs", env && *env ? env : "1");
    c.set("seed", "1");
    auto model_keys = [&] {
        c.set("family", "ar");
        c.set("p", "2");
        c.set("q", "0");
        c.set("g", "1");
        c.set("prior", "arr2");
        c.set("mu-r2", "0.33333333333333331");
        c.set("phi-r2", "3");
        c.set("xi-scale", "1");
        c.set("gaussian-sd", "1");
        c.set("rhs-p0", "0");
        c.set("rhs-slab-df", "4");
        c.set("rhs-slab-scale", "2");
        c.set("state-phi-sd", "0.5");
        c.set("state-scale-sd", "3");
    };
    auto sampler_keys = [&] {
        c.set("chains", "4");
        c.set("warmup", "1000");
        c.set("samples", "1000");
        c.set("target-accept", "0.8");
        c.set("max-treedepth", "10");
    };
    if (command == "fit") {
        model_keys();
        sampler_keys();
        c.set("data", "");
        c.set("out", "draws.csv");
        c.set("allow-nonconverged", "false");
        c.set("rhat-threshold", "1.05");
    } else if (command == "simulate") {
        c.set("dgp", "minnesota");
        c.set("T", "0");
        c.set("m", "0");
        c.set("rho", "0");
        c.set("state-scale", "1");
        c.set("lags", "4");
        c.set("burn-in", "500");
        c.set("out", "data.csv");
    } else if (command == "experiment") {
        sampler_keys();
        c.set("dgp", "minnesota");
        c.set("p", "9,30");
        c.set("m", "20");
        c.set("rho", "0");
        c.set("state-scale", "1,0.5,0.1");
        c.set("priors", "arr2-flat,arr2-minnesota,minnesota,rhs,gaussian");
        c.set("reps", "5");
        c.set("T", "0");
        c.set("lags", "4");
        c.set("xi-adjust", "false");
        c.set("lfo", "true");
        c.set("lfo-start", "0");
        c.set("lfo-stride", "10");
        c.set("lfo-chains", "2");
        c.set("lfo-warmup", "500");
        c.set("lfo-samples", "500");
        c.set("full", "false");
        c.set("out", "experiment.csv");
    } else if (command == "prior-check") {
        model_keys();
        c.set("p", "12");
        c.set("m", "0");
        c.set("T", "120");
        c.set("draws", "50000");
        c.set("out", "prior_check.csv");
    } else if (command == "diagnose") {
        c.set("draws", "");
        c.set("out", "");
    } else {
        throw UserError("unknown command '" + command + "'");
    }
    return c;
}

int cmd_fit(const Config& c) {
    const std::string path = c.str("data");
    if (path.empty()) throw UserError("fit: --data is required");
    const TimeSeriesData data = read_dataset(path);
    const models::ModelSpec spec = model_spec_from(c);
    std::optional<models::Model> model;
    try {
        model.emplace(spec, data);
    } catch (const std::invalid_argument& e) {
        throw UserError(std::string("fit: ") + e.what());
    }
    const inference::SamplerConfig sc = sampler_from(c);
    const inference::FitResult f = inference::fit(*model, sc);
    const std::string out = c.str("out");
    write_draws(out, f.draws, provenance("fit", c));
    std::vector<double> r2;
    for (const auto& x : f.draws.all_rows()) r2.push_back(model->bayes_r2(x));
    const double threshold = c.real("rhat-threshold");
    const bool converged = !(f.diagnostics.max_rhat > threshold);
    json j = diagnostics_json(f.diagnostics);
    j["config_hash"] = hashed(c).hash_hex();
    j["seed"] = sc.seed;
    j["bayes_r2"] = stats_json(r2);
    j["converged"] = converged;
    write_text(out + ".diagnostics.json", j.dump(2) + "\n");
    write_sidecar(out, c);
    std::cerr << fmt::format("fit: {} draws, {} divergences, max R-hat {:.4f}\n", f.diagnostics.total_draws,
                             f.diagnostics.divergences, f.diagnostics.max_rhat);
    if (!converged && !c.flag("allow-nonconverged")) {
        std::cerr << fmt::format("fit: max R-hat {:.4f} exceeds {} (use --allow-nonconverged to accept)\n",
                                 f.diagnostics.max_rhat, threshold);
        return 3;
    }
    return 0;
}

int cmd_simulate(const Config& c) {
    const std::string name = c.str("dgp");
    Rng rng(c.u64("seed"));
    const int T = c.integer("T");
    dgp::Simulation sim;
    try {
        if (is_ar_dgp(name)) {
            dgp::ArDgp d;
            d.phi = dgp::ar_phi_by_name(name);
            if (T > 0) d.T = T;
            d.burn_in = c.integer("burn-in");
            sim = dgp::simulate_ar(d, rng);
        } else if (name == "arx") {
            dgp::ArxDgp d;
            if (c.integer("m") > 0) d.m = c.integer("m");
            d.rho = c.real("rho");
            if (T > 0) d.T = T;
            d.burn_in = c.integer("burn-in");
            sim = dgp::simulate_arx(d, rng);
        } else if (name == "ltx") {
            dgp::LtxDgp d;
            if (c.integer("m") > 0) d.m = c.integer("m");
            d.rho = c.real("rho");
            d.sigma_delta = c.real("state-scale");
            d.lags = c.integer("lags");
            if (T > 0) d.T = T;
            sim = dgp::simulate_ltx(d, rng);
        } else {
            throw UserError("unknown dgp '" + name + "' (expected minnesota, oscillation, delayed, arx or ltx)");
        }
    } catch (const std::invalid_argument& e) {
        throw UserError(std::string("simulate: ") + e.what());
    }
    const std::string out = c.str("out");
    write_dataset(out, sim.data, provenance("simulate", c));
    json truth = {{"dgp", name}, {"T", sim.data.T()}, {"sigma", sim.sigma}};
    if (!sim.phi.empty()) truth["phi"] = sim.phi;
    if (!sim.beta.empty()) truth["beta"] = sim.beta;
    if (!sim.delta.empty()) {
        truth["delta"] = sim.delta;
        truth["sigma_delta"] = sim.sigma_delta;
        truth["phi_state"] = sim.phi_state;
    }
    truth["config_hash"] = hashed(c).hash_hex();
    write_text(out + ".truth.json", truth.dump(2) + "\n");
    write_sidecar(out, c);
    return 0;
}

int cmd_experiment(const Config& c) {
    ExperimentSettings s;
    s.seed = c.u64("seed");
    s.T = c.integer("T");
    s.ltx_lags = c.integer("lags");
    s.xi_adjust = c.flag("xi-adjust");
    s.sampler = sampler_from(c);
    s.sampler.jobs = 1;
    s.lfo = c.flag("lfo");
    s.lfo_start = c.integer("lfo-start");
    s.lfo_stride = c.integer("lfo-stride");
    s.lfo_sampler = s.sampler;
    s.lfo_sampler.chains = c.integer("lfo-chains");
    s.lfo_sampler.warmup = c.integer("lfo-warmup");
    s.lfo_sampler.samples = c.integer("lfo-samples");
    const int reps = c.integer("reps");
    if (reps < 1) throw UserError("experiment: reps must be >= 1");

    std::vector<CellSpec> cells;
    const auto priors_list = c.list("priors");
    for (const auto& pr : priors_list) (void)prior_from_name(pr);
    for (const auto& d : c.list("dgp")) {
        std::vector<CellSpec> base;
        if (is_ar_dgp(d)) {
            for (int p : c.int_list("p")) base.push_back({d, p, 0, 0.0, 0.0, "", 0});
        } else if (d == "arx") {
            for (int m : c.int_list("m")) {
                for (double rho : c.real_list("rho")) {
                    for (int p : c.int_list("p")) base.push_back({d, p, m, rho, 0.0, "", 0});
                }
            }
        } else if (d == "ltx") {
            for (int m : c.int_list("m")) {
                for (double rho : c.real_list("rho")) {
                    for (double sd : c.real_list("state-scale")) base.push_back({d, 0, m, rho, sd, "", 0});
                }
            }
        } else {
            throw UserError("unknown dgp '" + d + "' (expected minnesota, oscillation, delayed, arx or ltx)");
        }
        for (const auto& b : base) {
            for (const auto& pr : priors_list) {
                if (pr == "arr2-deterministic" && d != "ltx") continue;
                for (int rep = 0; rep < reps; ++rep) {
                    CellSpec cell = b;
                    cell.prior = pr;
                    cell.rep = rep;
                    cells.push_back(cell);
                }
            }
        }
    }

    std::vector<CellResult> results(cells.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mu;
    auto worker = [&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) {
            results[k] = run_cell(cells[k], s);
            const std::lock_guard<std::mutex> lock(log_mu);
            const auto& r = results[k];
            std::cerr << fmt::format("[{}/{}] {} p={} m={} rho={} s={} {} rep={} {}\n", k + 1, cells.size(), r.cell.dgp,
                                     r.cell.p, r.cell.m, r.cell.rho, r.cell.state_scale, r.cell.prior, r.cell.rep,
                                     r.ok ? "ok" : "FAILED: " + r.error);
        }
    };
    const int jobs = std::max(1, c.integer("jobs"));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    const Row header = {"dgp", "T", "p", "m", "rho", "state_scale", "prior", "rep", "data_seed", "fit_seed", "ok",
                        "rmse_phi", "rmse_beta", "rmse_state", "rmse_sigma_delta", "sigma_delta_mean", "mlpd",
                        "lfo_excluded", "r2_mean", "trend_share", "trend_fraction", "max_rhat", "divergences", "error"};
    std::vector<Row> rows;
    std::vector<eval::Record> recs;
    const char* metrics[] = {"rmse_phi", "rmse_beta", "rmse_sigma_delta", "mlpd"};
    for (const auto& r : results) {
        const auto& k = r.cell;
        rows.push_back({k.dgp, std::to_string(r.T), std::to_string(k.p), std::to_string(k.m), fmt_double(k.rho),
                        fmt_double(k.state_scale), k.prior, std::to_string(k.rep), std::to_string(r.data_seed),
                        std::to_string(r.fit_seed), r.ok ? "1" : "0", fmt_double(r.rmse_phi), fmt_double(r.rmse_beta),
                        fmt_double(r.rmse_state), fmt_double(r.rmse_sigma_delta), fmt_double(r.sigma_delta_mean),
                        fmt_double(r.mlpd), std::to_string(r.lfo_excluded), fmt_double(r.r2_mean),
                        fmt_double(r.trend_share), fmt_double(r.trend_fraction), fmt_double(r.max_rhat),
                        std::to_string(r.divergences), clean(r.error)});
        const double vals[] = {r.rmse_phi, r.rmse_beta, r.rmse_sigma_delta, r.mlpd};
        for (int q = 0; q < 4; ++q) {
            const double v = r.ok ? vals[q] : kNaN;
            recs.push_back({{k.dgp, std::to_string(k.p), std::to_string(k.m), fmt_double(k.rho),
                             fmt_double(k.state_scale), k.prior, metrics[q]},
                            v});
        }
    }
    const std::string out = c.str("out");
    const auto prov = provenance("experiment", c);
    write_table(out, header, rows, prov);
    std::vector<Row> srows;
    for (const auto& g : eval::aggregate(recs)) {
        Row row = g.key;
        row.push_back(fmt_double(g.mean));
        row.push_back(fmt_double(g.se));
        row.push_back(std::to_string(g.n));
        srows.push_back(row);
    }
    std::string stem = out;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") stem.resize(stem.size() - 4);
    write_table(stem + "_summary.csv", {"dgp", "p", "m", "rho", "state_scale", "prior", "metric", "mean", "se", "n"},
                srows, prov);
    write_sidecar(out, c);
    int failed = 0;
    for (const auto& r : results) failed += r.ok ? 0 : 1;
    std::cerr << fmt::format("experiment: {} cells, {} failed\n", results.size(), failed);
    return 0;
}

int cmd_prior_check(const Config& c) {
    const models::ModelSpec spec = model_spec_from(c);
    const int T = c.integer("T");
    const int m = c.integer("m");
    const int cols = spec.family == models::Family::LTX ? m * spec.g : m;
    Rng drng(mix_seed(c.u64("seed"), "prior-check-data"));
    // Standardised white noise, so data-based variance plug-ins are exactly one.
    auto standardised = [&] {
        std::vector<double> v(T);
        for (double& a : v) a = dist::sample_normal(0.0, 1.0, drng);
        const double mu = ts::sample_mean(v);
        for (double& a : v) a -= mu;
        const double sd = std::sqrt(ts::sample_variance(v));
        for (double& a : v) a /= sd;
        return v;
    };
    std::vector<double> y = standardised();
    Eigen::MatrixXd x(T, cols);
    for (int j = 0; j < cols; ++j) {
        const auto v = standardised();
        for (int t = 0; t < T; ++t) x(t, j) = v[t];
    }
    std::optional<models::Model> model;
    try {
        model.emplace(spec, TimeSeriesData(std::move(y), std::move(x)));
    } catch (const std::invalid_argument& e) {
        throw UserError(std::string("prior-check: ") + e.what());
    }
    const int n = c.integer("draws");
    if (n < 1) throw UserError("prior-check: draws must be >= 1");
    Rng rng(c.u64("seed"));
    const eval::Pushforward pf = eval::prior_pushforward(*model, n, rng);
    Row header = {"draw", "r2", "max_root_modulus"};
    for (const auto& name : pf.components) header.push_back("contrib." + name);
    std::vector<Row> rows;
    for (int s = 0; s < n; ++s) {
        Row r = {std::to_string(s + 1), fmt_double(pf.r2[s]),
                 pf.max_root_modulus.empty() ? "nan" : fmt_double(pf.max_root_modulus[s])};
        for (Eigen::Index k = 0; k < pf.contribution.cols(); ++k) r.push_back(fmt_double(pf.contribution(s, k)));
        rows.push_back(std::move(r));
    }
    const std::string out = c.str("out");
    const auto prov = provenance("prior-check", c);
    write_table(out, header, rows, prov);
    std::vector<Row> srows;
    const auto r2s = eval::summarize(pf.r2);
    srows.push_back({"r2", fmt_double(r2s.mean), fmt_double(r2s.se)});
    srows.push_back({"nonstationary_fraction", fmt_double(pf.nonstationary_fraction), "nan"});
    if (spec.prior.kind == priors::PriorKind::Arr2) {
        const dist::BetaMP b(spec.prior.arr2.mu_r2, spec.prior.arr2.phi_r2);
        const double ks = eval::ks_distance(pf.r2, [&](double v) { return dist::cdf(b, v); });
        srows.push_back({"ks_r2_vs_beta", fmt_double(ks), "nan"});
    }
    for (Eigen::Index k = 0; k < pf.contribution.cols(); ++k) {
        const Eigen::VectorXd col = pf.contribution.col(k);
        const auto sm = eval::summarize(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())));
        srows.push_back({"contrib." + pf.components[k], fmt_double(sm.mean), fmt_double(sm.se)});
    }
    std::string stem = out;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") stem.resize(stem.size() - 4);
    write_table(stem + "_summary.csv", {"quantity", "mean", "se"}, srows, prov);
    write_sidecar(out, c);
    return 0;
}

int cmd_diagnose(const Config& c) {
    const std::string path = c.str("draws");
    if (path.empty()) throw UserError("diagnose: --draws is required");
    const inference::DrawsMatrix d = read_draws(path);
    json j = diagnostics_json(inference::diagnose(d));
    const std::string out = c.str("out");
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        write_text(out, j.dump(2) + "\n");
    }
    return 0;
}

namespace {

Config full_scale(const Config& base) {
    Config c = base;
    c.set("reps", "25");
    c.set("p", "1,2,4,6,8,9,10,15,20,30,40,50,60");
    c.set("m", "20,100,200,400");
    c.set("rho", "0,0.5,0.9");
    c.set("state-scale", "1,0.5,0.1");
    c.set("lfo-stride", "1");
    c.set("lfo-chains", "4");
    c.set("lfo-warmup", "1000");
    c.set("lfo-samples", "1000");
    return c;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"ARR2 shrinkage priors for autoregressive time-series models"};
    app.require_subcommand(1);
    const std::vector<std::string> commands = {"fit", "simulate", "experiment", "prior-check", "diagnose"};
    std::map<std::string, Config> defaults;
    std::map<std::string, std::map<std::string, std::string>> flag_values;
    std::map<std::string, std::string> config_paths;
    std::map<std::string, CLI::App*> subs;
    for (const auto& cmd : commands) {
        defaults[cmd] = defaults_for(cmd);
        CLI::App* sub = app.add_subcommand(cmd);
        subs[cmd] = sub;
        sub->add_option("--config", config_paths[cmd], "key = value config file");
        for (const auto& [key, value] : defaults[cmd].values()) {
            if (value == "true" || value == "false") {
                sub->add_flag_function(
                    "--" + key, [&fv = flag_values[cmd], k = key](std::int64_t) { fv[k] = "true"; },
                    "flag (default " + value + ")");
            } else {
                sub->add_option("--" + key, flag_values[cmd][key], "default: " + value);
            }
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        for (const auto& cmd : commands) {
            if (!subs[cmd]->parsed()) continue;
            Config file;
            if (!config_paths[cmd].empty()) file = parse_config_file(config_paths[cmd]);
            Config flags;
            for (const auto& [k, v] : flag_values[cmd]) {
                if (subs[cmd]->count("--" + k) > 0) flags.set(k, v);
            }
            Config resolved = defaults[cmd];
            merge(resolved, file);
            merge(resolved, flags);
            if (cmd == "experiment" && resolved.flag("full")) {
                resolved = full_scale(defaults[cmd]);
                merge(resolved, file);
                merge(resolved, flags);
            }
            for (const auto& [k, v] : file.values()) {
                if (!defaults[cmd].has(k)) throw UserError(fmt::format("{}: unknown key '{}' for {}", config_paths[cmd], k, cmd));
            }
            if (cmd == "fit") return cmd_fit(resolved);
            if (cmd == "simulate") return cmd_simulate(resolved);
            if (cmd == "experiment") return cmd_experiment(resolved);
            if (cmd == "prior-check") return cmd_prior_check(resolved);
            return cmd_diagnose(resolved);
        }
    } catch (const UserError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace arr2::cli
