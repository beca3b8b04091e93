#include "arr2/transforms.hpp"

namespace arr2::inference {

int TransformMap::add(std::string name, TransformKind kind, int size, bool scalar, int first_index) {
    if (size < 1) throw std::invalid_argument("transform block '" + name + "' must have positive size");
    Block b;
    b.name = std::move(name);
    b.kind = kind;
    b.size = size;
    b.offset = dim_;
    b.u_offset = u_dim_;
    b.u_size = kind == TransformKind::Simplex ? size - 1 : size;
    b.scalar = scalar;
    b.first_index = first_index;
    dim_ += b.size;
    u_dim_ += b.u_size;
    blocks_.push_back(std::move(b));
    return static_cast<int>(blocks_.size()) - 1;
}

std::vector<std::string> TransformMap::names() const {
    std::vector<std::string> out;
    out.reserve(dim_);
    for (const Block& b : blocks_) {
        if (b.scalar) {
            out.push_back(b.name);
            continue;
        }
        for (int i = 0; i < b.size; ++i) out.push_back(b.name + "." + std::to_string(i + b.first_index));
    }
    return out;
}

int TransformMap::find(const std::string& name) const {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (blocks_[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

namespace {

double logit(double p) { return std::log(p) - std::log1p(-p); }

[[noreturn]] void boundary(const char* what, double v) {
    throw std::domain_error(std::string("to_unconstrained: ") + what + " value " + std::to_string(v) +
                            " is on or outside the boundary");
}

}  // namespace

void unconstrain_block(TransformKind kind, std::span<const double> x, std::span<double> u) {
    switch (kind) {
        case TransformKind::Real:
            for (std::size_t i = 0; i < x.size(); ++i) u[i] = x[i];
            return;
        case TransformKind::Positive:
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (!(x[i] > 0.0)) boundary("positive", x[i]);
                u[i] = std::log(x[i]);
            }
            return;
        case TransformKind::UnitInterval:
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (!(x[i] > 0.0 && x[i] < 1.0)) boundary("unit-interval", x[i]);
                u[i] = logit(x[i]);
            }
            return;
        case TransformKind::Symmetric:
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (!(x[i] > -1.0 && x[i] < 1.0)) boundary("(-1, 1)", x[i]);
                u[i] = std::atanh(x[i]);
            }
            return;
        case TransformKind::Simplex: {
            const std::size_t K = x.size();
            double total = 0.0;
            for (double v : x) {
                if (!(v > 0.0)) boundary("simplex component", v);
                total += v;
            }
            if (std::abs(total - 1.0) > 1e-8) boundary("simplex sum", total);
            // logit(x_k / stick_k) = log(x_k / rest), with rest summed from the tail so
            // tiny trailing components survive.
            std::vector<double> rest(K, 0.0);
            for (std::size_t k = K - 1; k > 0; --k) rest[k - 1] = rest[k] + x[k];
            for (std::size_t k = 0; k + 1 < K; ++k) {
                u[k] = std::log(x[k]) - std::log(rest[k]) + std::log(static_cast<double>(K - k - 1));
            }
            return;
        }
        case TransformKind::AR1State:
        case TransformKind::Scaled:
            throw std::logic_error("unconstrain_block: this block kind needs a model-supplied scale");
    }
}

void ar1_state_unconstrain(std::span<const double> delta, double phi, double s, std::span<double> z) {
    if (!(s > 0.0)) boundary("state scale", s);
    z[0] = delta[0] / s;
    for (std::size_t t = 1; t < delta.size(); ++t) z[t] = (delta[t] - phi * delta[t - 1]) / s;
}

}  // namespace arr2::inference
