#include "arr2/ad.hpp"

#include <algorithm>

namespace arr2::ad {

void Tape::clear() {
    begin_.assign(1, 0);
    operand_.clear();
    partial_.clear();
    adjoint_.clear();
}

std::int32_t Tape::finish_node() {
    begin_.push_back(static_cast<std::uint32_t>(operand_.size()));
    return static_cast<std::int32_t>(begin_.size() - 2);
}

std::int32_t Tape::push_leaf() { return finish_node(); }

std::int32_t Tape::push_unary(std::int32_t a, double da) {
    add_operand(a, da);
    return finish_node();
}

std::int32_t Tape::push_binary(std::int32_t a, double da, std::int32_t b, double db) {
    add_operand(a, da);
    add_operand(b, db);
    return finish_node();
}

void Tape::backward(std::int32_t output) {
    adjoint_.assign(size(), 0.0);
    adjoint_[output] = 1.0;
    for (std::int32_t n = output; n >= 0; --n) {
        const double a = adjoint_[n];
        if (a == 0.0) continue;
        for (std::uint32_t k = begin_[n]; k < begin_[n + 1]; ++k) {
            adjoint_[operand_[k]] += partial_[k] * a;
        }
    }
}

Tape& tape() {
    thread_local Tape t;
    return t;
}

Var unary(double value, const Var& a, double da) {
    if (a.is_constant()) return Var(value);
    return Var(value, tape().push_unary(a.index(), da));
}

Var binary(double value, const Var& a, double da, const Var& b, double db) {
    if (a.is_constant()) return unary(value, b, db);
    if (b.is_constant()) return unary(value, a, da);
    return Var(value, tape().push_binary(a.index(), da, b.index(), db));
}

Var& Var::operator+=(const Var& o) { return *this = *this + o; }
Var& Var::operator-=(const Var& o) { return *this = *this - o; }
Var& Var::operator*=(const Var& o) { return *this = *this * o; }
Var& Var::operator/=(const Var& o) { return *this = *this / o; }

Var dot(std::span<const Var> a, std::span<const double> b) {
    Tape& t = tape();
    double value = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        value += a[i].val() * b[i];
        if (!a[i].is_constant() && b[i] != 0.0) {
            t.add_operand(a[i].index(), b[i]);
            any = true;
        }
    }
    if (!any) return Var(value);
    return Var(value, t.finish_node());
}

Var dot(std::span<const Var> a, std::span<const Var> b) {
    Tape& t = tape();
    double value = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        value += a[i].val() * b[i].val();
        if (!a[i].is_constant()) {
            t.add_operand(a[i].index(), b[i].val());
            any = true;
        }
        if (!b[i].is_constant()) {
            t.add_operand(b[i].index(), a[i].val());
            any = true;
        }
    }
    if (!any) return Var(value);
    return Var(value, t.finish_node());
}

Var sum(std::span<const Var> a) {
    Tape& t = tape();
    double value = 0.0;
    bool any = false;
    for (const Var& v : a) {
        value += v.val();
        if (!v.is_constant()) {
            t.add_operand(v.index(), 1.0);
            any = true;
        }
    }
    if (!any) return Var(value);
    return Var(value, t.finish_node());
}

Var sum_squares(std::span<const Var> a) {
    Tape& t = tape();
    double value = 0.0;
    bool any = false;
    for (const Var& v : a) {
        value += v.val() * v.val();
        if (!v.is_constant()) {
            t.add_operand(v.index(), 2.0 * v.val());
            any = true;
        }
    }
    if (!any) return Var(value);
    return Var(value, t.finish_node());
}

}  // namespace arr2::ad

namespace arr2::math {

Var exp(const Var& x) {
    const double e = std::exp(x.val());
    return ad::unary(e, x, e);
}
Var log(const Var& x) { return ad::unary(std::log(x.val()), x, 1.0 / x.val()); }
Var log1p(const Var& x) { return ad::unary(std::log1p(x.val()), x, 1.0 / (1.0 + x.val())); }
Var expm1(const Var& x) { return ad::unary(std::expm1(x.val()), x, std::exp(x.val())); }
Var sqrt(const Var& x) {
    const double s = std::sqrt(x.val());
    return ad::unary(s, x, 0.5 / s);
}
Var tanh(const Var& x) {
    const double t = std::tanh(x.val());
    return ad::unary(t, x, 1.0 - t * t);
}
Var pow(const Var& x, double k) {
    const double v = std::pow(x.val(), k);
    return ad::unary(v, x, k * std::pow(x.val(), k - 1.0));
}
Var square(const Var& x) { return ad::unary(x.val() * x.val(), x, 2.0 * x.val()); }
Var log1p_exp(const Var& x) { return ad::unary(log1p_exp(x.val()), x, inv_logit(x.val())); }
Var inv_logit(const Var& x) {
    const double s = inv_logit(x.val());
    return ad::unary(s, x, s * (1.0 - s));
}
Var log_inv_logit(const Var& x) {
    return ad::unary(log_inv_logit(x.val()), x, inv_logit(-x.val()));
}
Var log1m_inv_logit(const Var& x) {
    return ad::unary(log1m_inv_logit(x.val()), x, -inv_logit(x.val()));
}

}  // namespace arr2::math
