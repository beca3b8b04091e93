#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arr2/ad.hpp"

namespace arr2::inference {

enum class TransformKind {
    Real,          ///< identity
    Positive,      ///< exp
    UnitInterval,  ///< inverse logit
    Simplex,       ///< stick-breaking, K - 1 free coordinates
    Symmetric,     ///< tanh onto (-1, 1)
    AR1State,      ///< non-centred AR(1) path: delta_0 = s z_0, delta_t = phi delta_{t-1} + s z_t
    Scaled,        ///< non-centred normal: x = exp(log_var / 2) u, log_var supplied by the model
};

struct Block {
    std::string name;
    TransformKind kind = TransformKind::Real;
    int size = 1;
    int offset = 0;    ///< constrained offset
    int u_offset = 0;  ///< unconstrained offset
    int u_size = 1;
    bool scalar = false;
    int first_index = 1;  ///< index used for the first flattened name
};

/**
 * @brief Ordered blocks mapping unconstrained sampler coordinates to model parameters.
 *
 * Scaled blocks are constrained after the plain blocks and AR1State blocks
 * last, so caller-supplied scales can depend on any plain parameter.
 */
class TransformMap {
public:
    int add(std::string name, TransformKind kind, int size, bool scalar = false, int first_index = 1);

    [[nodiscard]] const std::vector<Block>& blocks() const noexcept { return blocks_; }
    [[nodiscard]] int constrained_dim() const noexcept { return dim_; }
    [[nodiscard]] int unconstrained_dim() const noexcept { return u_dim_; }
    [[nodiscard]] std::vector<std::string> names() const;
    /// Block index by name, or -1.
    [[nodiscard]] int find(const std::string& name) const;

    /**
     * @brief Maps u to constrained x and returns the log-Jacobian.
     *
     * `state(x)` returns {phi, s} for the AR(1) state block;
     * `log_var(x, offset, size)` returns the log variances of a Scaled block.
     * Both see x with all plain blocks filled.
     */
    template <class T, class StateFn, class ScaleFn>
    T to_constrained(std::span<const T> u, std::span<T> x, StateFn&& state, ScaleFn&& log_var) const;

    template <class T>
    T to_constrained(std::span<const T> u, std::span<T> x) const {
        return to_constrained(u, x, no_state<T>, no_scale<T>);
    }

    /// Inverse map, with the same callbacks evaluated at the constrained point.
    template <class StateFn, class ScaleFn>
    std::vector<double> to_unconstrained(std::span<const double> x, StateFn&& state, ScaleFn&& log_var) const;

    std::vector<double> to_unconstrained(std::span<const double> x) const {
        return to_unconstrained(x, no_state<double>, no_scale<double>);
    }

private:
    template <class T>
    static std::pair<T, T> no_state(std::span<const T>) {
        throw std::logic_error("transform map has a state block but no state function");
    }
    template <class T>
    static std::vector<T> no_scale(std::span<const T>, int, int) {
        throw std::logic_error("transform map has a scaled block but no scale function");
    }

    std::vector<Block> blocks_;
    int dim_ = 0;
    int u_dim_ = 0;
};

// ---------------------------------------------------------------------------
// Per-kind maps.

template <class T>
T constrain_block(TransformKind kind, std::span<const T> u, std::span<T> x) {
    using math::exp;
    using math::inv_logit;
    using math::log1m_inv_logit;
    using math::log1p_exp;
    using math::log_inv_logit;
    using math::tanh;
    T lj = 0.0;
    switch (kind) {
        case TransformKind::Real:
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = u[i];
            break;
        case TransformKind::Positive:
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] = exp(u[i]);
                lj += u[i];
            }
            break;
        case TransformKind::UnitInterval:
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] = inv_logit(u[i]);
                lj += log_inv_logit(u[i]) + log1m_inv_logit(u[i]);
            }
            break;
        case TransformKind::Symmetric:
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] = tanh(u[i]);
                lj += std::log(4.0) - 2.0 * (u[i] + log1p_exp(-2.0 * u[i]));
            }
            break;
        case TransformKind::Simplex: {
            const std::size_t K = x.size();
            T stick = 1.0;
            T log_stick = 0.0;
            for (std::size_t k = 0; k + 1 < K; ++k) {
                const T a = u[k] - std::log(static_cast<double>(K - k - 1));
                x[k] = stick * inv_logit(a);
                lj += log_stick + log_inv_logit(a) + log1m_inv_logit(a);
                log_stick += log1m_inv_logit(a);
                stick = stick * inv_logit(-a);
            }
            x[K - 1] = stick;
            break;
        }
        case TransformKind::AR1State:
        case TransformKind::Scaled:
            throw std::logic_error("constrain_block: this block kind needs a model-supplied scale");
    }
    return lj;
}

/// Fills u from x; throws std::domain_error on boundary values.
void unconstrain_block(TransformKind kind, std::span<const double> x, std::span<double> u);

template <class T>
T ar1_state_constrain(std::span<const T> z, const T& phi, const T& s, std::span<T> delta) {
    using math::log;
    delta[0] = s * z[0];
    for (std::size_t t = 1; t < delta.size(); ++t) delta[t] = phi * delta[t - 1] + s * z[t];
    return static_cast<double>(delta.size()) * log(s);
}

void ar1_state_unconstrain(std::span<const double> delta, double phi, double s, std::span<double> z);

template <class T, class StateFn, class ScaleFn>
T TransformMap::to_constrained(std::span<const T> u, std::span<T> x, StateFn&& state, ScaleFn&& log_var) const {
    using math::exp;
    T lj = 0.0;
    for (const Block& b : blocks_) {
        if (b.kind == TransformKind::AR1State || b.kind == TransformKind::Scaled) continue;
        lj += constrain_block<T>(b.kind, u.subspan(b.u_offset, b.u_size), x.subspan(b.offset, b.size));
    }
    const std::span<const T> cx(x.data(), x.size());
    for (const Block& b : blocks_) {
        if (b.kind != TransformKind::Scaled) continue;
        const std::vector<T> lv = log_var(cx, b.offset, b.size);
        for (int i = 0; i < b.size; ++i) {
            x[b.offset + i] = exp(0.5 * lv[i]) * u[b.u_offset + i];
            lj += 0.5 * lv[i];
        }
    }
    for (const Block& b : blocks_) {
        if (b.kind != TransformKind::AR1State) continue;
        const auto [phi, s] = state(cx);
        lj += ar1_state_constrain<T>(u.subspan(b.u_offset, b.u_size), phi, s, x.subspan(b.offset, b.size));
    }
    return lj;
}

template <class StateFn, class ScaleFn>
std::vector<double> TransformMap::to_unconstrained(std::span<const double> x, StateFn&& state, ScaleFn&& log_var) const {
    if (static_cast<int>(x.size()) != dim_) {
        throw std::invalid_argument("to_unconstrained: expected " + std::to_string(dim_) + " values, got " +
                                    std::to_string(x.size()));
    }
    std::vector<double> u(u_dim_);
    std::span<double> us(u);
    for (const Block& b : blocks_) {
        if (b.kind == TransformKind::AR1State) {
            const auto [phi, s] = state(x);
            ar1_state_unconstrain(x.subspan(b.offset, b.size), phi, s, us.subspan(b.u_offset, b.u_size));
        } else if (b.kind == TransformKind::Scaled) {
            const std::vector<double> lv = log_var(x, b.offset, b.size);
            for (int i = 0; i < b.size; ++i) u[b.u_offset + i] = x[b.offset + i] * std::exp(-0.5 * lv[i]);
        } else {
            unconstrain_block(b.kind, x.subspan(b.offset, b.size), us.subspan(b.u_offset, b.u_size));
        }
    }
    return u;
}

}  // namespace arr2::inference
