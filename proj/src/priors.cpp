#include "arr2/priors.hpp"

#include <stdexcept>

namespace arr2::priors {

std::string to_string(PriorKind k) {
    switch (k) {
        case PriorKind::Arr2: return "arr2";
        case PriorKind::Minnesota: return "minnesota";
        case PriorKind::Rhs: return "rhs";
        case PriorKind::Gaussian: return "gaussian";
    }
    return "?";
}

PriorKind prior_kind_from_string(const std::string& s) {
    if (s == "arr2") return PriorKind::Arr2;
    if (s == "minnesota") return PriorKind::Minnesota;
    if (s == "rhs") return PriorKind::Rhs;
    if (s == "gaussian") return PriorKind::Gaussian;
    throw std::invalid_argument("unknown prior '" + s + "' (expected arr2, minnesota, rhs or gaussian)");
}

std::string to_string(LagWeights w) {
    switch (w) {
        case LagWeights::None: return "none";
        case LagWeights::Flat: return "flat";
        case LagWeights::Minnesota: return "minnesota";
    }
    return "?";
}

LagWeights lag_weights_from_string(const std::string& s) {
    if (s == "none") return LagWeights::None;
    if (s == "flat") return LagWeights::Flat;
    if (s == "minnesota") return LagWeights::Minnesota;
    throw std::invalid_argument("unknown group weights '" + s + "' (expected none, flat or minnesota)");
}

std::vector<double> arr2_concentrations(const std::string& scheme, int p, int m) {
    if (p < 0 || m < 0) throw std::invalid_argument("arr2_concentrations: negative order");
    std::vector<double> xi;
    xi.reserve(p + m);
    if (scheme == "minnesota") {
        const double top = static_cast<double>(p) * p / 10.0;
        for (int i = 1; i <= p; ++i) xi.push_back(top / (static_cast<double>(i) * i));
        xi.insert(xi.end(), m, 0.1);
    } else if (scheme == "flat") {
        xi.assign(p + m, 1.0);
    } else if (scheme == "sparse") {
        xi.assign(p + m, 0.1);
    } else {
        throw std::invalid_argument("unknown concentration scheme '" + scheme +
                                    "' (expected minnesota, flat or sparse)");
    }
    return xi;
}

std::vector<double> deterministic_lag_weights(int p, LagWeights kind) {
    if (p < 1) throw std::invalid_argument("deterministic_lag_weights: p must be >= 1");
    std::vector<double> w(p, 1.0 / p);
    if (kind == LagWeights::Minnesota) {
        double total = 0.0;
        for (int j = 1; j <= p; ++j) total += 1.0 / (static_cast<double>(j) * j);
        for (int j = 1; j <= p; ++j) w[j - 1] = 1.0 / (static_cast<double>(j) * j) / total;
    }
    return w;
}

double arr2_coeff_scale(double sigma2, double var_ref, double tau2, double psi_k) {
    if (!(var_ref > 0.0)) throw std::invalid_argument("arr2_coeff_scale: reference variance must be positive");
    return sigma2 / var_ref * tau2 * psi_k;
}

double rhs_tau0(double p0, int D, double sigma, double n) {
    if (!(p0 > 0.0) || p0 >= D) {
        throw std::invalid_argument("rhs: expected active count p0 must lie in (0, " + std::to_string(D) + ")");
    }
    return p0 / (D - p0) * sigma / std::sqrt(n);
}

}  // namespace arr2::priors
