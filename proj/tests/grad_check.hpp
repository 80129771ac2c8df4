#pragma once
// Central-difference gradient checks shared by the unit tests and the acceptance run.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "featcomp/nn.hpp"

namespace gradcheck {

using namespace featcomp;
using namespace featcomp::nn;

inline Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Tensor t(std::move(shape));
    std::uniform_real_distribution<double> u(lo, hi);
    for (double& v : t.values) v = u(rng);
    return t;
}

inline Tensor targets_for(LossKind kind, std::size_t n, std::size_t k, Rng& rng) {
    Tensor t({n, k});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    switch (kind) {
        case LossKind::SoftmaxXent:
            for (std::size_t r = 0; r < n; ++r) {
                double s = 0.0;
                for (std::size_t c = 0; c < k; ++c) s += t(r, c) = u(rng) + 0.05;
                for (std::size_t c = 0; c < k; ++c) t(r, c) /= s;
            }
            break;
        case LossKind::SigmoidBce:
        case LossKind::Mse:
            for (double& v : t.values) v = u(rng);
            break;
        case LossKind::WassersteinLinear:
            for (double& v : t.values) v = u(rng) < 0.5 ? 1.0 : -1.0;
            break;
    }
    return t;
}

inline double loss_of(ModelGraph& m, LossKind kind, const Tensor& x, const Tensor& t) {
    return loss_and_grad(kind, m.forward(x), t).loss;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({1e-6, std::abs(a), std::abs(b)}); }

/// Max relative error between analytic and central-difference gradients over every parameter.
inline double max_param_grad_error(ModelGraph& m, LossKind kind, const Tensor& x, const Tensor& t) {
    const auto grads = backward(m, kind, x, t);
    const double eps = 1e-4;
    double worst = 0.0;
    auto params = m.parameters();
    for (std::size_t j = 0; j < params.size(); ++j) {
        auto& w = params[j].value->values;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double keep = w[i];
            w[i] = keep + eps;
            const double up = loss_of(m, kind, x, t);
            w[i] = keep - eps;
            const double down = loss_of(m, kind, x, t);
            w[i] = keep;
            worst = std::max(worst, rel_err(grads[j].value.values[i], (up - down) / (2 * eps)));
        }
    }
    return worst;
}

inline double max_input_grad_error(ModelGraph& m, LossKind kind, Tensor x, const Tensor& t) {
    m.zero_grad();
    const auto lr = loss_and_grad(kind, m.forward_train(x), t);
    const Tensor gx = m.backward(lr.grad, true);
    const double eps = 1e-4;
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double keep = x.values[i];
        x.values[i] = keep + eps;
        const double up = loss_of(m, kind, x, t);
        x.values[i] = keep - eps;
        const double down = loss_of(m, kind, x, t);
        x.values[i] = keep;
        worst = std::max(worst, rel_err(gx.values[i], (up - down) / (2 * eps)));
    }
    return worst;
}

inline ModelGraph small_mlp(std::size_t in, std::vector<std::size_t> sizes, LayerKind act, std::optional<LayerKind> last,
                     std::uint64_t seed) {
    ModelGraph m(Topology::Mlp, in, {make_chain("body", 0, in, sizes, act, act)},
                 make_chain("head", 0, sizes.back(), {3}, act, last));
    Rng rng(seed);
    init_he_uniform(m, rng);
    // non-zero biases so every bias gradient path is exercised
    for (auto& p : m.parameters())
        if (p.value->shape.size() == 1)
            for (double& v : p.value->values) v = std::uniform_real_distribution<double>(-0.2, 0.2)(rng);
    return m;
}

}  // namespace gradcheck
