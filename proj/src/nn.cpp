#include "featcomp/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "featcomp/binio.hpp"
#include "featcomp/kernels.hpp"

namespace featcomp::nn {

namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_str(const std::vector<std::size_t>& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) s += (i ? "," : "") + std::to_string(shape[i]);
    return s + "]";
}

void require_finite(const Tensor& t, const std::string& where) {
    for (double v : t.values) {
        if (!std::isfinite(v)) throw NumericError("non-finite value in " + where);
    }
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> s, double fill) : shape(std::move(s)), values(product(shape), fill) {}

Tensor::Tensor(std::vector<std::size_t> s, std::vector<double> v) : shape(std::move(s)), values(std::move(v)) {
    if (values.size() != product(shape)) {
        throw ShapeError("tensor " + shape_str(shape) + " needs " + std::to_string(product(shape)) + " values, got " +
                         std::to_string(values.size()));
    }
}

Tensor gather_rows(const Tensor& m, const std::vector<std::size_t>& idx) {
    const std::size_t c = m.cols();
    auto shape = m.shape;
    shape[0] = idx.size();
    Tensor out(shape);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= m.rows()) throw ShapeError("row index out of range");
        std::copy_n(m.row(idx[i]), c, out.values.data() + i * c);
    }
    return out;
}

const char* layer_name(LayerKind kind) {
    switch (kind) {
        case LayerKind::Dense: return "dense";
        case LayerKind::ReLU: return "relu";
        case LayerKind::Sigmoid: return "sigmoid";
        case LayerKind::Tanh: return "tanh";
    }
    return "?";
}

Layer dense(std::size_t in, std::size_t out) {
    if (in == 0 || out == 0) throw ShapeError("dense layer needs non-zero widths");
    Layer l;
    l.kind = LayerKind::Dense;
    l.in = in;
    l.out = out;
    l.weight = Tensor({out, in});
    l.bias = Tensor({out});
    l.grad_weight = Tensor({out, in});
    l.grad_bias = Tensor({out});
    return l;
}

Layer activation(LayerKind kind, std::size_t width) {
    if (kind == LayerKind::Dense) throw ShapeError("activation() needs a pointwise kind");
    Layer l;
    l.kind = kind;
    l.in = l.out = width;
    return l;
}

Chain make_chain(std::string name, std::size_t offset, std::size_t in, const std::vector<std::size_t>& sizes,
                 LayerKind act, std::optional<LayerKind> last) {
    Chain c{std::move(name), offset, in, {}};
    std::size_t w = in;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        c.layers.push_back(dense(w, sizes[i]));
        w = sizes[i];
        const bool final = i + 1 == sizes.size();
        if (!final) {
            c.layers.push_back(activation(act, w));
        } else if (last) {
            c.layers.push_back(activation(*last, w));
        }
    }
    return c;
}

const char* topology_name(Topology t) {
    switch (t) {
        case Topology::TwinMlp: return "twin-mlp";
        case Topology::Mlp: return "mlp";
        case Topology::Autoencoder: return "autoencoder";
        case Topology::Generator: return "generator";
        case Topology::Discriminator: return "discriminator";
        case Topology::Critic: return "critic";
    }
    return "?";
}

Topology parse_topology(std::string_view name) {
    for (auto t : {Topology::TwinMlp, Topology::Mlp, Topology::Autoencoder, Topology::Generator,
                   Topology::Discriminator, Topology::Critic}) {
        if (name == topology_name(t)) return t;
    }
    throw std::invalid_argument("unknown topology '" + std::string(name) + "'");
}

// ---- layer math -------------------------------------------------------------

namespace {

Tensor layer_forward(const Layer& l, const Tensor& x) {
    const std::size_t n = x.rows();
    Tensor y({n, l.out});
    switch (l.kind) {
        case LayerKind::Dense:
            for (std::size_t r = 0; r < n; ++r) {
                const double* xr = x.row(r);
                double* yr = y.row(r);
                for (std::size_t o = 0; o < l.out; ++o) yr[o] = l.bias.values[o] + kernels::dot(xr, l.weight.row(o), l.in);
            }
            break;
        case LayerKind::ReLU:
            for (std::size_t i = 0; i < x.size(); ++i) y.values[i] = x.values[i] > 0.0 ? x.values[i] : 0.0;
            break;
        case LayerKind::Sigmoid:
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double v = x.values[i];
                // split by sign so exp never overflows
                if (v >= 0.0) {
                    y.values[i] = 1.0 / (1.0 + std::exp(-v));
                } else {
                    const double e = std::exp(v);
                    y.values[i] = e / (1.0 + e);
                }
            }
            break;
        case LayerKind::Tanh:
            for (std::size_t i = 0; i < x.size(); ++i) y.values[i] = std::tanh(x.values[i]);
            break;
    }
    return y;
}

Tensor layer_backward(Layer& l, const Tensor& g, bool want_input_grad) {
    const std::size_t n = g.rows();
    switch (l.kind) {
        case LayerKind::Dense: {
            Tensor gx;
            if (want_input_grad) gx = Tensor({n, l.in});
            for (std::size_t r = 0; r < n; ++r) {
                const double* xr = l.cache_in.row(r);
                const double* gr = g.row(r);
                for (std::size_t o = 0; o < l.out; ++o) {
                    const double gv = gr[o];
                    if (gv == 0.0) continue;
                    kernels::axpy(gv, xr, l.grad_weight.row(o), l.in);
                    l.grad_bias.values[o] += gv;
                    if (want_input_grad) kernels::axpy(gv, l.weight.row(o), gx.row(r), l.in);
                }
            }
            return gx;
        }
        case LayerKind::ReLU: {
            Tensor gx = g;
            for (std::size_t i = 0; i < gx.size(); ++i) {
                if (l.cache_out.values[i] <= 0.0) gx.values[i] = 0.0;
            }
            return gx;
        }
        case LayerKind::Sigmoid: {
            Tensor gx = g;
            for (std::size_t i = 0; i < gx.size(); ++i) {
                const double s = l.cache_out.values[i];
                gx.values[i] *= s * (1.0 - s);
            }
            return gx;
        }
        case LayerKind::Tanh: {
            Tensor gx = g;
            for (std::size_t i = 0; i < gx.size(); ++i) {
                const double t = l.cache_out.values[i];
                gx.values[i] *= 1.0 - t * t;
            }
            return gx;
        }
    }
    return {};
}

Tensor slice_cols(const Tensor& x, std::size_t offset, std::size_t width) {
    const std::size_t n = x.rows();
    Tensor out({n, width});
    for (std::size_t r = 0; r < n; ++r) std::copy_n(x.row(r) + offset, width, out.row(r));
    return out;
}

Tensor chain_forward(const Chain& c, Tensor x) {
    for (std::size_t i = 0; i < c.layers.size(); ++i) {
        x = layer_forward(c.layers[i], x);
        require_finite(x, "activation " + c.name + "." + std::to_string(i));
    }
    return x;
}

Tensor chain_forward_train(Chain& c, Tensor x) {
    for (std::size_t i = 0; i < c.layers.size(); ++i) {
        auto& l = c.layers[i];
        Tensor y = layer_forward(l, x);
        require_finite(y, "activation " + c.name + "." + std::to_string(i));
        if (l.kind == LayerKind::Dense) {
            l.cache_in = std::move(x);
            l.cache_out = Tensor();
        } else {
            l.cache_in = Tensor();
            l.cache_out = y;
        }
        x = std::move(y);
    }
    return x;
}

Tensor chain_backward(Chain& c, Tensor g, bool want_input_grad) {
    for (std::size_t i = c.layers.size(); i-- > 0;) {
        const bool need = i > 0 || want_input_grad;
        auto& l = c.layers[i];
        if (l.kind == LayerKind::Dense && l.cache_in.rows() != g.rows()) {
            throw ShapeError("backward called without a matching forward_train");
        }
        g = layer_backward(l, g, need);
        if (!need) return {};
    }
    return g;
}

void check_chain(const Chain& c) {
    std::size_t w = c.in;
    for (std::size_t i = 0; i < c.layers.size(); ++i) {
        const auto& l = c.layers[i];
        const std::string where = c.name + "." + std::to_string(i);
        if (l.in != w) throw ShapeError("layer " + where + " expects width " + std::to_string(l.in) + ", gets " + std::to_string(w));
        if (l.kind == LayerKind::Dense) {
            if (l.weight.shape != std::vector<std::size_t>{l.out, l.in} || l.bias.shape != std::vector<std::size_t>{l.out}) {
                throw ShapeError("layer " + where + " has mis-shaped parameters");
            }
        } else if (l.in != l.out) {
            throw ShapeError("pointwise layer " + where + " changes width");
        }
        w = l.out;
    }
}

template <class ChainT, class F>
void for_each_dense(std::vector<ChainT>& body, ChainT& head, F&& f) {
    auto visit = [&](ChainT& c) {
        for (std::size_t i = 0; i < c.layers.size(); ++i) {
            if (c.layers[i].kind == LayerKind::Dense) f(c, i, c.layers[i]);
        }
    };
    for (auto& c : body) visit(c);
    visit(head);
}

}  // namespace

// ---- model graph ------------------------------------------------------------

ModelGraph::ModelGraph(Topology topology, std::size_t input_width, std::vector<Chain> body, Chain head)
    : topology_(topology), input_width_(input_width), body_(std::move(body)), head_(std::move(head)) {
    if (input_width_ == 0) throw ShapeError("model input width must be > 0");
    if (body_.empty()) throw ShapeError("model needs at least one body chain");
    std::set<std::string> names;
    for (const auto& c : body_) {
        if (c.offset + c.in > input_width_) throw ShapeError("chain " + c.name + " reads past the input");
        if (!names.insert(c.name).second) throw ShapeError("duplicate chain name " + c.name);
        check_chain(c);
    }
    if (!names.insert(head_.name).second) throw ShapeError("duplicate chain name " + head_.name);
    if (head_.offset != 0 || head_.in != feature_width()) throw ShapeError("head width does not match features");
    check_chain(head_);
    for (auto& c : body_)
        for (auto& l : c.layers) {
            if (l.kind == LayerKind::Dense) {
                l.grad_weight = Tensor({l.out, l.in});
                l.grad_bias = Tensor({l.out});
            }
        }
    for (auto& l : head_.layers) {
        if (l.kind == LayerKind::Dense) {
            l.grad_weight = Tensor({l.out, l.in});
            l.grad_bias = Tensor({l.out});
        }
    }
}

std::size_t ModelGraph::feature_width() const noexcept {
    std::size_t w = 0;
    for (const auto& c : body_) w += c.out();
    return w;
}

std::size_t ModelGraph::output_width() const noexcept { return head_.out(); }

void ModelGraph::check_input(const Tensor& x) const {
    if (x.shape.size() != 2 || x.cols() != input_width_ || x.rows() == 0) {
        throw ShapeError("model expects a batch of shape [n," + std::to_string(input_width_) + "], got " +
                         shape_str(x.shape));
    }
}

Tensor ModelGraph::features(const Tensor& x) const {
    check_input(x);
    if (body_.size() == 1 && body_[0].offset == 0 && body_[0].in == input_width_) return chain_forward(body_[0], x);
    const std::size_t n = x.rows();
    Tensor out({n, feature_width()});
    std::size_t col = 0;
    for (const auto& c : body_) {
        Tensor y = chain_forward(c, slice_cols(x, c.offset, c.in));
        for (std::size_t r = 0; r < n; ++r) std::copy_n(y.row(r), c.out(), out.row(r) + col);
        col += c.out();
    }
    return out;
}

Tensor ModelGraph::forward(const Tensor& x) const { return chain_forward(head_, features(x)); }

Tensor ModelGraph::forward_train(const Tensor& x) {
    check_input(x);
    const std::size_t n = x.rows();
    Tensor feats;
    if (body_.size() == 1 && body_[0].offset == 0 && body_[0].in == input_width_) {
        feats = chain_forward_train(body_[0], x);
    } else {
        feats = Tensor({n, feature_width()});
        std::size_t col = 0;
        for (auto& c : body_) {
            Tensor y = chain_forward_train(c, slice_cols(x, c.offset, c.in));
            for (std::size_t r = 0; r < n; ++r) std::copy_n(y.row(r), c.out(), feats.row(r) + col);
            col += c.out();
        }
    }
    return chain_forward_train(head_, std::move(feats));
}

Tensor ModelGraph::backward(const Tensor& grad_out, bool want_input_grad) {
    if (grad_out.shape.size() != 2 || grad_out.cols() != output_width()) {
        throw ShapeError("output gradient has shape " + shape_str(grad_out.shape));
    }
    Tensor g = chain_backward(head_, grad_out, true);
    const std::size_t n = g.rows();
    if (body_.size() == 1 && body_[0].offset == 0 && body_[0].in == input_width_) {
        return chain_backward(body_[0], std::move(g), want_input_grad);
    }
    Tensor gx;
    if (want_input_grad) gx = Tensor({n, input_width_});
    std::size_t col = 0;
    for (auto& c : body_) {
        Tensor gc = slice_cols(g, col, c.out());
        col += c.out();
        Tensor gi = chain_backward(c, std::move(gc), want_input_grad);
        if (want_input_grad) {
            for (std::size_t r = 0; r < n; ++r) {
                double* dst = gx.row(r) + c.offset;
                const double* src = gi.row(r);
                for (std::size_t k = 0; k < c.in; ++k) dst[k] += src[k];
            }
        }
    }
    return gx;
}

void ModelGraph::zero_grad() {
    for_each_dense(body_, head_, [](Chain&, std::size_t, Layer& l) {
        std::fill(l.grad_weight.values.begin(), l.grad_weight.values.end(), 0.0);
        std::fill(l.grad_bias.values.begin(), l.grad_bias.values.end(), 0.0);
    });
}

std::vector<ParamRef> ModelGraph::parameters() {
    std::vector<ParamRef> out;
    for_each_dense(body_, head_, [&](Chain& c, std::size_t i, Layer& l) {
        const std::string base = c.name + "." + std::to_string(i);
        out.push_back({base + ".weight", &l.weight, &l.grad_weight});
        out.push_back({base + ".bias", &l.bias, &l.grad_bias});
    });
    return out;
}

std::vector<NamedTensor> ModelGraph::parameter_values() const {
    std::vector<NamedTensor> out;
    for (auto& p : const_cast<ModelGraph*>(this)->parameters()) out.push_back({p.name, *p.value});
    return out;
}

std::size_t ModelGraph::parameter_count() const {
    std::size_t n = 0;
    for (const auto& p : parameter_values()) n += p.value.size();
    return n;
}

void ModelGraph::clip_parameters(double bound) {
    for (auto& p : parameters()) {
        for (double& v : p.value->values) v = std::clamp(v, -bound, bound);
    }
}

ModelGraph ModelGraph::body_only() const {
    auto body = body_;
    for (auto& c : body)
        for (auto& l : c.layers) l.cache_in = l.cache_out = Tensor();
    return ModelGraph(topology_, input_width_, std::move(body), Chain{head_.name, 0, feature_width(), {}});
}

bool ModelGraph::same_parameters(const ModelGraph& other) const {
    const auto a = parameter_values(), b = other.parameter_values();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || a[i].value != b[i].value) return false;
    }
    return true;
}

void init_he_uniform(ModelGraph& model, Rng& rng) {
    for (auto& p : model.parameters()) {
        if (p.value->shape.size() == 2) {
            const double bound = std::sqrt(6.0 / static_cast<double>(p.value->shape[1]));
            std::uniform_real_distribution<double> u(-bound, bound);
            for (double& v : p.value->values) v = u(rng);
        } else {
            std::fill(p.value->values.begin(), p.value->values.end(), 0.0);
        }
    }
}

ModelGraph make_twin_mlp(std::uint64_t seed, std::size_t half_width, std::size_t hidden, std::size_t branch_out,
                         std::size_t num_classes) {
    std::vector<Chain> body{make_chain("f1", 0, half_width, {hidden, branch_out}, LayerKind::ReLU, LayerKind::ReLU),
                            make_chain("f2", half_width, half_width, {hidden, branch_out}, LayerKind::ReLU, LayerKind::ReLU)};
    ModelGraph m(Topology::TwinMlp, 2 * half_width, std::move(body),
                 make_chain("head", 0, 2 * branch_out, {num_classes}, LayerKind::ReLU, std::nullopt));
    Rng rng(seed);
    init_he_uniform(m, rng);
    return m;
}

ModelGraph make_autoencoder(std::uint64_t seed, std::size_t input, std::size_t hidden, std::size_t code) {
    ModelGraph m(Topology::Autoencoder, input,
                 {make_chain("encoder", 0, input, {hidden, code}, LayerKind::ReLU, LayerKind::ReLU)},
                 make_chain("decoder", 0, code, {hidden, input}, LayerKind::ReLU, LayerKind::Sigmoid));
    Rng rng(seed);
    init_he_uniform(m, rng);
    return m;
}

ModelGraph make_generator(std::uint64_t seed, std::size_t noise, std::size_t hidden, std::size_t output) {
    ModelGraph m(Topology::Generator, noise,
                 {make_chain("g", 0, noise, {hidden, output}, LayerKind::ReLU, LayerKind::Sigmoid)},
                 Chain{"head", 0, output, {}});
    Rng rng(seed);
    init_he_uniform(m, rng);
    return m;
}

ModelGraph make_discriminator(std::uint64_t seed, std::size_t input, std::size_t hidden, std::size_t feature,
                              Topology topology) {
    const std::string name = topology == Topology::Critic ? "critic" : "d";
    ModelGraph m(topology, input, {make_chain(name, 0, input, {hidden, feature}, LayerKind::ReLU, LayerKind::ReLU)},
                 make_chain("head", 0, feature, {1}, LayerKind::ReLU, std::nullopt));
    Rng rng(seed);
    init_he_uniform(m, rng);
    return m;
}

// ---- losses -----------------------------------------------------------------

const char* loss_name(LossKind kind) {
    switch (kind) {
        case LossKind::SoftmaxXent: return "softmax-xent";
        case LossKind::SigmoidBce: return "sigmoid-bce";
        case LossKind::Mse: return "mse";
        case LossKind::WassersteinLinear: return "wasserstein-linear";
    }
    return "?";
}

LossKind parse_loss(std::string_view name) {
    for (auto k : {LossKind::SoftmaxXent, LossKind::SigmoidBce, LossKind::Mse, LossKind::WassersteinLinear}) {
        if (name == loss_name(k)) return k;
    }
    throw std::invalid_argument("unknown loss '" + std::string(name) + "'");
}

LossResult loss_and_grad(LossKind kind, const Tensor& output, const Tensor& targets) {
    if (output.shape != targets.shape || output.shape.size() != 2 || output.rows() == 0) {
        throw ShapeError("loss expects matching [n,k] output and targets, got " + shape_str(output.shape) + " and " +
                         shape_str(targets.shape));
    }
    const std::size_t n = output.rows(), k = output.cols();
    const double inv_n = 1.0 / static_cast<double>(n);
    LossResult res;
    res.grad = Tensor(output.shape);
    switch (kind) {
        case LossKind::SoftmaxXent:
            for (std::size_t r = 0; r < n; ++r) {
                const double* z = output.row(r);
                const double* t = targets.row(r);
                double* g = res.grad.row(r);
                const double mx = *std::max_element(z, z + k);
                double sum = 0.0, tsum = 0.0;
                for (std::size_t c = 0; c < k; ++c) sum += std::exp(z[c] - mx);
                const double lse = mx + std::log(sum);
                for (std::size_t c = 0; c < k; ++c) {
                    tsum += t[c];
                    if (t[c] != 0.0) res.loss -= t[c] * (z[c] - lse);
                }
                for (std::size_t c = 0; c < k; ++c) g[c] = (std::exp(z[c] - lse) * tsum - t[c]) * inv_n;
            }
            res.loss *= inv_n;
            break;
        case LossKind::SigmoidBce:
            for (std::size_t i = 0; i < output.size(); ++i) {
                const double z = output.values[i], t = targets.values[i];
                res.loss += std::max(z, 0.0) - z * t + std::log1p(std::exp(-std::abs(z)));
                const double s = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
                res.grad.values[i] = (s - t) * inv_n;
            }
            res.loss *= inv_n;
            break;
        case LossKind::Mse: {
            const double inv = 1.0 / static_cast<double>(output.size());
            for (std::size_t i = 0; i < output.size(); ++i) {
                const double d = output.values[i] - targets.values[i];
                res.loss += d * d;
                res.grad.values[i] = 2.0 * d * inv;
            }
            res.loss *= inv;
            break;
        }
        case LossKind::WassersteinLinear:
            for (std::size_t i = 0; i < output.size(); ++i) {
                res.loss -= targets.values[i] * output.values[i];
                res.grad.values[i] = -targets.values[i] * inv_n;
            }
            res.loss *= inv_n;
            break;
    }
    if (!std::isfinite(res.loss)) throw NumericError(std::string("non-finite ") + loss_name(kind) + " loss");
    return res;
}

std::vector<NamedTensor> backward(ModelGraph& model, LossKind kind, const Tensor& batch, const Tensor& targets,
                                  double* loss_out) {
    model.zero_grad();
    auto out = model.forward_train(batch);
    auto lr = loss_and_grad(kind, out, targets);
    model.backward(lr.grad);
    if (loss_out) *loss_out = lr.loss;
    std::vector<NamedTensor> grads;
    for (auto& p : model.parameters()) {
        require_finite(*p.grad, "gradient " + p.name);
        grads.push_back({p.name, *p.grad});
    }
    return grads;
}

// ---- optimizers ---------------------------------------------------------------

const char* optimizer_name(OptimizerKind kind) { return kind == OptimizerKind::Sgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer(std::string_view name) {
    if (name == "sgd") return OptimizerKind::Sgd;
    if (name == "adam") return OptimizerKind::Adam;
    throw std::invalid_argument("unknown optimizer '" + std::string(name) + "'");
}

Optimizer::Optimizer(OptimizerConfig cfg) : cfg_(cfg) {
    if (!(cfg_.learning_rate >= 0.0) || !std::isfinite(cfg_.learning_rate)) {
        throw std::invalid_argument("learning rate must be finite and >= 0");
    }
    if (!(cfg_.beta1 >= 0.0 && cfg_.beta1 < 1.0 && cfg_.beta2 >= 0.0 && cfg_.beta2 < 1.0)) {
        throw std::invalid_argument("adam betas must lie in [0,1)");
    }
}

void Optimizer::step(ModelGraph& model) {
    auto params = model.parameters();
    const double lr = cfg_.learning_rate;
    if (cfg_.kind == OptimizerKind::Sgd) {
        for (auto& p : params) kernels::axpy(-lr, p.grad->values.data(), p.value->values.data(), p.value->size());
        return;
    }
    if (m_.empty()) {
        for (auto& p : params) {
            m_.emplace_back(p.value->size(), 0.0);
            v_.emplace_back(p.value->size(), 0.0);
        }
    }
    if (m_.size() != params.size()) throw std::logic_error("optimizer reused across different models");
    ++t_;
    const double b1 = cfg_.beta1, b2 = cfg_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    for (std::size_t j = 0; j < params.size(); ++j) {
        auto& w = params[j].value->values;
        const auto& g = params[j].grad->values;
        auto& m = m_[j];
        auto& v = v_[j];
        for (std::size_t i = 0; i < w.size(); ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * g[i];
            v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
            w[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg_.epsilon);
        }
    }
}

// ---- checkpoints --------------------------------------------------------------

namespace {

constexpr char kModelMagic[4] = {'F', 'C', 'M', 'G'};

void write_chain(binio::Writer& w, const Chain& c) {
    w.str(c.name);
    w.le(static_cast<std::uint32_t>(c.offset));
    w.le(static_cast<std::uint32_t>(c.in));
    w.le(static_cast<std::uint32_t>(c.layers.size()));
    for (const auto& l : c.layers) {
        w.le(static_cast<std::uint8_t>(l.kind));
        w.le(static_cast<std::uint32_t>(l.in));
        w.le(static_cast<std::uint32_t>(l.out));
    }
}

Chain read_chain(binio::Reader& r) {
    Chain c;
    c.name = r.str();
    c.offset = r.le<std::uint32_t>();
    c.in = r.le<std::uint32_t>();
    const auto count = r.le<std::uint32_t>();
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto kind = r.le<std::uint8_t>();
        const std::size_t in = r.le<std::uint32_t>();
        const std::size_t out = r.le<std::uint32_t>();
        if (kind > static_cast<std::uint8_t>(LayerKind::Tanh)) throw binio::FormatError("unknown layer kind");
        if (in == 0 || out == 0 || in > (1u << 24) || out > (1u << 24)) throw binio::FormatError("bad layer width");
        if (kind == 0) {
            c.layers.push_back(dense(in, out));
        } else {
            if (in != out) throw binio::FormatError("pointwise layer changes width");
            c.layers.push_back(activation(static_cast<LayerKind>(kind), in));
        }
    }
    return c;
}

}  // namespace

void save_model(const ModelGraph& model, const std::filesystem::path& path) {
    binio::Writer w;
    w.bytes(kModelMagic, 4);
    w.le(kCheckpointVersion);
    w.str(topology_name(model.topology()));
    w.le(static_cast<std::uint32_t>(model.input_width()));
    w.le(static_cast<std::uint32_t>(model.body().size()));
    for (const auto& c : model.body()) write_chain(w, c);
    write_chain(w, model.head());
    const auto params = model.parameter_values();
    w.le(static_cast<std::uint32_t>(params.size()));
    for (const auto& p : params) {
        w.str(p.name);
        w.le(static_cast<std::uint32_t>(p.value.shape.size()));
        for (auto d : p.value.shape) w.le(static_cast<std::uint32_t>(d));
        for (double v : p.value.values) w.f32(static_cast<float>(v));
    }
    w.commit(path);
}

ModelGraph load_model(const std::filesystem::path& path) {
    binio::Reader r(path);
    char magic[4];
    r.bytes(magic, 4);
    if (!std::equal(magic, magic + 4, kModelMagic)) throw binio::FormatError("not a model checkpoint (bad magic)");
    const auto version = r.le<std::uint16_t>();
    if (version != kCheckpointVersion) throw binio::FormatError("checkpoint version " + std::to_string(version) + " unsupported");
    Topology topo;
    try {
        topo = parse_topology(r.str());
    } catch (const std::invalid_argument& e) {
        throw binio::FormatError(e.what());
    }
    const std::size_t input = r.le<std::uint32_t>();
    const auto nbody = r.le<std::uint32_t>();
    if (nbody == 0 || nbody > 64) throw binio::FormatError("bad body chain count");
    std::vector<Chain> body;
    for (std::uint32_t i = 0; i < nbody; ++i) body.push_back(read_chain(r));
    Chain head = read_chain(r);
    ModelGraph m = [&] {
        try {
            return ModelGraph(topo, input, std::move(body), std::move(head));
        } catch (const ShapeError& e) {
            throw binio::FormatError(std::string("inconsistent architecture: ") + e.what());
        }
    }();
    auto params = m.parameters();
    const auto count = r.le<std::uint32_t>();
    if (count != params.size()) throw binio::FormatError("parameter count mismatch");
    for (auto& p : params) {
        if (r.str() != p.name) throw binio::FormatError("unexpected parameter block, wanted " + p.name);
        const auto rank = r.le<std::uint32_t>();
        std::vector<std::size_t> shape(rank);
        for (auto& d : shape) d = r.le<std::uint32_t>();
        if (shape != p.value->shape) throw binio::FormatError("shape mismatch for " + p.name);
        for (double& v : p.value->values) v = r.f32();
    }
    r.expect_end();
    return m;
}

}  // namespace featcomp::nn
