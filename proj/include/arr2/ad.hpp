#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace arr2::ad {

/**
 * @brief Reverse-mode gradient tape.
 *
 * Each node stores a contiguous run of (operand, partial) pairs. Nodes are
 * appended in evaluation order, so a single reverse sweep propagates
 * adjoints. n-ary nodes (dot products, sums of squares) keep the tape short
 * for linear predictors over long lag windows.
 *
 * One tape per thread; see tape().
 */
class Tape {
public:
    void clear();

    std::int32_t push_leaf();
    std::int32_t push_unary(std::int32_t a, double da);
    std::int32_t push_binary(std::int32_t a, double da, std::int32_t b, double db);

    /// Begin an n-ary node; follow with add_operand() calls and finish_node().
    void begin_node() { }
    void add_operand(std::int32_t a, double da) {
        operand_.push_back(a);
        partial_.push_back(da);
    }
    std::int32_t finish_node();

    [[nodiscard]] std::size_t size() const noexcept { return begin_.size() - 1; }

    /// Seeds `output` with adjoint 1 and sweeps backwards.
    void backward(std::int32_t output);

    [[nodiscard]] double adjoint(std::int32_t node) const { return adjoint_[node]; }

private:
    std::vector<std::uint32_t> begin_{0};
    std::vector<std::int32_t> operand_;
    std::vector<double> partial_;
    std::vector<double> adjoint_;
};

/// Thread-local active tape.
Tape& tape();

/**
 * @brief Scalar that records its dependencies on the thread's tape.
 *
 * A Var with index < 0 is a constant and never touches the tape.
 */
class Var {
public:
    Var() = default;
    Var(double value) : value_(value) {}  // NOLINT(implicit)
    Var(double value, std::int32_t index) : value_(value), index_(index) {}

    /// New independent variable on the active tape.
    static Var independent(double value) { return Var(value, tape().push_leaf()); }

    [[nodiscard]] double val() const noexcept { return value_; }
    [[nodiscard]] std::int32_t index() const noexcept { return index_; }
    [[nodiscard]] bool is_constant() const noexcept { return index_ < 0; }

    Var& operator+=(const Var& o);
    Var& operator-=(const Var& o);
    Var& operator*=(const Var& o);
    Var& operator/=(const Var& o);

private:
    double value_ = 0.0;
    std::int32_t index_ = -1;
};

Var unary(double value, const Var& a, double da);
Var binary(double value, const Var& a, double da, const Var& b, double db);

inline Var operator+(const Var& a, const Var& b) { return binary(a.val() + b.val(), a, 1.0, b, 1.0); }
inline Var operator-(const Var& a, const Var& b) { return binary(a.val() - b.val(), a, 1.0, b, -1.0); }
inline Var operator*(const Var& a, const Var& b) {
    return binary(a.val() * b.val(), a, b.val(), b, a.val());
}
inline Var operator/(const Var& a, const Var& b) {
    const double inv = 1.0 / b.val();
    const double v = a.val() * inv;
    return binary(v, a, inv, b, -v * inv);
}
inline Var operator-(const Var& a) { return unary(-a.val(), a, -1.0); }

inline Var operator+(const Var& a, double b) { return unary(a.val() + b, a, 1.0); }
inline Var operator+(double a, const Var& b) { return unary(a + b.val(), b, 1.0); }
inline Var operator-(const Var& a, double b) { return unary(a.val() - b, a, 1.0); }
inline Var operator-(double a, const Var& b) { return unary(a - b.val(), b, -1.0); }
inline Var operator*(const Var& a, double b) { return unary(a.val() * b, a, b); }
inline Var operator*(double a, const Var& b) { return unary(a * b.val(), b, a); }
inline Var operator/(const Var& a, double b) { return unary(a.val() / b, a, 1.0 / b); }
inline Var operator/(double a, const Var& b) {
    const double v = a / b.val();
    return unary(v, b, -v / b.val());
}

inline bool operator<(const Var& a, const Var& b) { return a.val() < b.val(); }
inline bool operator>(const Var& a, const Var& b) { return a.val() > b.val(); }
inline bool operator<=(const Var& a, const Var& b) { return a.val() <= b.val(); }
inline bool operator>=(const Var& a, const Var& b) { return a.val() >= b.val(); }
inline bool operator<(const Var& a, double b) { return a.val() < b; }
inline bool operator>(const Var& a, double b) { return a.val() > b; }
inline bool operator<=(const Var& a, double b) { return a.val() <= b; }
inline bool operator>=(const Var& a, double b) { return a.val() >= b; }

/// Σ a_i b_i as a single node.
Var dot(std::span<const Var> a, std::span<const double> b);
Var dot(std::span<const Var> a, std::span<const Var> b);
/// Σ a_i as a single node.
Var sum(std::span<const Var> a);
/// Σ a_i² as a single node.
Var sum_squares(std::span<const Var> a);

/**
 * @brief Clears the thread's tape on construction and destruction.
 */
class TapeScope {
public:
    TapeScope() { tape().clear(); }
    ~TapeScope() { tape().clear(); }
    TapeScope(const TapeScope&) = delete;
    TapeScope& operator=(const TapeScope&) = delete;
};

}  // namespace arr2::ad

namespace arr2::math {

using ad::Var;

inline double value_of(double x) { return x; }
inline double value_of(const Var& x) { return x.val(); }

inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double log1p(double x) { return std::log1p(x); }
inline double expm1(double x) { return std::expm1(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double tanh(double x) { return std::tanh(x); }
inline double pow(double x, double k) { return std::pow(x, k); }
inline double square(double x) { return x * x; }

/// log(1 + e^x) without overflow.
inline double log1p_exp(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
inline double inv_logit(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}
inline double log_inv_logit(double x) { return -log1p_exp(-x); }
inline double log1m_inv_logit(double x) { return -log1p_exp(x); }

Var exp(const Var& x);
Var log(const Var& x);
Var log1p(const Var& x);
Var expm1(const Var& x);
Var sqrt(const Var& x);
Var tanh(const Var& x);
Var pow(const Var& x, double k);
Var square(const Var& x);
Var log1p_exp(const Var& x);
Var inv_logit(const Var& x);
Var log_inv_logit(const Var& x);
Var log1m_inv_logit(const Var& x);

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
inline Var dot(std::span<const Var> a, std::span<const double> b) { return ad::dot(a, b); }
inline Var dot(std::span<const Var> a, std::span<const Var> b) { return ad::dot(a, b); }

inline double sum(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v;
    return s;
}
inline Var sum(std::span<const Var> a) { return ad::sum(a); }

inline double sum_squares(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}
inline Var sum_squares(std::span<const Var> a) { return ad::sum_squares(a); }

}  // namespace arr2::math
