#include "featcomp/train.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace featcomp::train {

using nn::LossKind;
using nn::Optimizer;

GanBalance GanBalance::parse(std::string_view text) {
    auto bad = [&] { return ConfigError("bad gan balance '" + std::string(text) + "'"); };
    GanBalance b;
    try {
        if (text.rfind("fixed:", 0) == 0) {
            const std::string rest(text.substr(6));
            const auto colon = rest.find(':');
            if (colon == std::string::npos) throw bad();
            std::size_t used = 0;
            b.kind = BalanceKind::FixedAlternation;
            b.d_steps = std::stoul(rest.substr(0, colon), &used);
            if (used != colon) throw bad();
            const std::string g = rest.substr(colon + 1);
            b.g_steps = std::stoul(g, &used);
            if (used != g.size()) throw bad();
            if (b.d_steps == 0) throw bad();
            return b;
        }
        if (text.rfind("threshold:", 0) == 0) {
            const std::string rest(text.substr(10));
            std::size_t used = 0;
            b.kind = BalanceKind::LossThreshold;
            b.tau_d = std::stod(rest, &used);
            if (used != rest.size() || !(b.tau_d > 0.0) || !std::isfinite(b.tau_d)) throw bad();
            return b;
        }
    } catch (const std::logic_error&) {
        throw bad();
    }
    throw bad();
}

std::string GanBalance::name() const {
    if (kind == BalanceKind::FixedAlternation) return "fixed:" + std::to_string(d_steps) + ":" + std::to_string(g_steps);
    char buf[64];
    std::snprintf(buf, sizeof buf, "threshold:%.17g", tau_d);
    return buf;
}

void TrainConfig::validate() const {
    // lr = 0 is allowed: it is the documented way to freeze a run
    if (!(optimizer.learning_rate >= 0.0) || !std::isfinite(optimizer.learning_rate)) {
        throw ConfigError("learning rate must be finite and >= 0");
    }
    if (batch_size == 0) throw ConfigError("batch size must be >= 1");
    if (epochs == 0) throw ConfigError("epochs must be >= 1");
    if (!(wgan_clip > 0.0)) throw ConfigError("wgan clip must be > 0");
    if (critic_steps == 0) throw ConfigError("critic steps must be >= 1");
    if (noise_dim == 0) throw ConfigError("noise dim must be >= 1");
    if (balance.kind == BalanceKind::FixedAlternation && balance.d_steps == 0) {
        throw ConfigError("fixed alternation needs at least one D step");
    }
    try {
        Optimizer probe(optimizer);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void write_metrics_csv(std::ostream& out, const Metrics& metrics) {
    out << "step,metric,value\n";
    char buf[64];
    for (const auto& m : metrics) {
        std::snprintf(buf, sizeof buf, "%.10g", m.value);
        out << m.step << ',' << m.metric << ',' << buf << '\n';
    }
}

Tensor dataset_inputs(const Dataset& d) {
    const std::size_t px = d.pixels();
    Tensor x({d.size(), 2 * px});
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto& e = d.examples[i];
        double* r = x.row(i);
        std::copy(e.x_l.begin(), e.x_l.end(), r);
        std::copy(e.x_r.begin(), e.x_r.end(), r + px);
    }
    return x;
}

std::vector<std::size_t> dataset_labels(const Dataset& d, Target target) {
    std::vector<std::size_t> y(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) y[i] = target == Target::Left ? d.examples[i].y_l : d.examples[i].y_r;
    return y;
}

FeatureExtractor untrained_extractor(nn::Topology topology, std::uint64_t seed, std::size_t input_width,
                                     std::size_t num_classes) {
    switch (topology) {
        case nn::Topology::TwinMlp:
            if (input_width % 2 != 0) throw ConfigError("twin MLP input width must be even");
            return FeatureExtractor(nn::make_twin_mlp(seed, input_width / 2, 128, 50, num_classes));
        case nn::Topology::Autoencoder:
            return FeatureExtractor(nn::make_autoencoder(seed, input_width));
        case nn::Topology::Discriminator:
        case nn::Topology::Critic:
            return FeatureExtractor(nn::make_discriminator(seed, input_width, 128, 100, topology));
        default:
            throw ConfigError(std::string("no default extractor for topology ") + nn::topology_name(topology));
    }
}

namespace {

Tensor one_hot(const std::vector<std::size_t>& labels, const std::vector<std::size_t>& idx, std::size_t k) {
    Tensor t({idx.size(), k});
    for (std::size_t i = 0; i < idx.size(); ++i) t(i, labels[idx[i]]) = 1.0;
    return t;
}

std::size_t argmax_row(const Tensor& m, std::size_t r) {
    const double* p = m.row(r);
    return static_cast<std::size_t>(std::max_element(p, p + m.cols()) - p);
}

double accuracy(const ModelGraph& model, const Tensor& x, const std::vector<std::size_t>& labels) {
    if (x.rows() == 0) return 0.0;
    const Tensor out = model.forward(x);
    std::size_t hit = 0;
    for (std::size_t r = 0; r < out.rows(); ++r) hit += argmax_row(out, r) == labels[r];
    return static_cast<double>(hit) / static_cast<double>(out.rows());
}

/// Deterministic minibatch order, reshuffled every epoch.
class Batcher {
public:
    Batcher(std::size_t n, std::size_t batch, std::uint64_t seed) : order_(n), batch_(batch), rng_(seed) {
        std::iota(order_.begin(), order_.end(), std::size_t{0});
    }
    std::size_t batches_per_epoch() const { return (order_.size() + batch_ - 1) / batch_; }
    /// Next batch of indices; reshuffles when a pass starts.
    std::vector<std::size_t> next() {
        if (pos_ == 0) std::shuffle(order_.begin(), order_.end(), rng_);
        const std::size_t end = std::min(pos_ + batch_, order_.size());
        std::vector<std::size_t> idx(order_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                     order_.begin() + static_cast<std::ptrdiff_t>(end));
        pos_ = end == order_.size() ? 0 : end;
        return idx;
    }
    /// The batch next() would return, without consuming it.
    std::vector<std::size_t> peek() {
        if (pos_ == 0) {
            auto saved = rng_;
            auto order = order_;
            std::shuffle(order.begin(), order.end(), saved);
            return {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(batch_, order.size()))};
        }
        const std::size_t end = std::min(pos_ + batch_, order_.size());
        return {order_.begin() + static_cast<std::ptrdiff_t>(pos_), order_.begin() + static_cast<std::ptrdiff_t>(end)};
    }

private:
    std::vector<std::size_t> order_;
    std::size_t batch_;
    std::size_t pos_ = 0;
    Rng rng_;
};

template <class F>
auto guarded(const char* what, std::size_t step, F&& f) {
    try {
        return f();
    } catch (const nn::NumericError& e) {
        throw DivergenceError(std::string(what) + " diverged at step " + std::to_string(step) + ": " + e.what());
    }
}

}  // namespace

// ---- supervised ---------------------------------------------------------------

SupervisedResult train_supervised(ModelGraph& model, const Tensor& inputs, const std::vector<std::size_t>& labels,
                                  const TrainConfig& cfg) {
    cfg.validate();
    if (inputs.rows() == 0) throw ConfigError("training set is empty");
    if (labels.size() != inputs.rows()) throw ConfigError("label count does not match inputs");
    const std::size_t k = model.output_width();
    for (auto y : labels) {
        if (y >= k) throw ConfigError("label " + std::to_string(y) + " exceeds head width " + std::to_string(k));
    }
    Optimizer opt(cfg.optimizer);
    Batcher batches(inputs.rows(), cfg.batch_size, derive_seed(cfg.seed, {0x5e9}));
    SupervisedResult res;
    std::size_t step = 0;
    for (std::size_t ep = 0; ep < cfg.epochs; ++ep) {
        double sum = 0.0;
        std::size_t seen = 0;
        for (std::size_t b = 0; b < batches.batches_per_epoch(); ++b) {
            const auto idx = batches.next();
            const Tensor x = nn::gather_rows(inputs, idx);
            const Tensor t = one_hot(labels, idx, k);
            double loss = 0.0;
            guarded("supervised training", step, [&] {
                nn::backward(model, LossKind::SoftmaxXent, x, t, &loss);
                return 0;
            });
            opt.step(model);
            sum += loss * static_cast<double>(idx.size());
            seen += idx.size();
            ++step;
        }
        res.epoch_loss.push_back(sum / static_cast<double>(seen));
        res.metrics.push_back({step, "train_loss", res.epoch_loss.back()});
    }
    res.train_accuracy = guarded("supervised evaluation", step, [&] { return accuracy(model, inputs, labels); });
    res.metrics.push_back({step, "train_accuracy", res.train_accuracy});
    return res;
}

SupervisedResult train_supervised(ModelGraph& model, const Dataset& data, const TrainConfig& cfg) {
    if (data.size() == 0) throw ConfigError("training set is empty");
    if (model.output_width() != data.params.num_classes) {
        throw ConfigError("head width " + std::to_string(model.output_width()) + " does not match " +
                          std::to_string(data.params.num_classes) + " classes");
    }
    return train_supervised(model, dataset_inputs(data), dataset_labels(data, Target::Left), cfg);
}

// ---- probe --------------------------------------------------------------------

const char* probe_scaling_name(ProbeScaling s) {
    switch (s) {
        case ProbeScaling::Standardize: return "standardize";
        case ProbeScaling::GlobalRms: return "global-rms";
        case ProbeScaling::None: return "none";
    }
    return "?";
}

ProbeScaling parse_probe_scaling(std::string_view name) {
    for (auto s : {ProbeScaling::Standardize, ProbeScaling::GlobalRms, ProbeScaling::None})
        if (name == probe_scaling_name(s)) return s;
    throw ConfigError("unknown probe scaling '" + std::string(name) + "'");
}

ProbeResult train_probe(const Tensor& train_features, const std::vector<std::size_t>& train_labels,
                        const Tensor& test_features, const std::vector<std::size_t>& test_labels,
                        std::size_t num_classes, const TrainConfig& cfg, ProbeScaling scaling) {
    const std::size_t d = train_features.cols();
    if (train_features.rows() == 0 || d == 0) throw ConfigError("probe needs a non-empty feature matrix");
    if (test_features.rows() > 0 && test_features.cols() != d) {
        throw nn::ShapeError("test features have width " + std::to_string(test_features.cols()) + ", probe expects " +
                             std::to_string(d));
    }
    if (test_labels.size() != test_features.rows()) throw ConfigError("test label count does not match features");

    ProbeResult res;
    res.mean.assign(d, 0.0);
    res.scale.assign(d, 1.0);
    const double n = static_cast<double>(train_features.rows());
    if (scaling == ProbeScaling::Standardize) {
        for (std::size_t r = 0; r < train_features.rows(); ++r)
            for (std::size_t c = 0; c < d; ++c) res.mean[c] += train_features(r, c);
        for (auto& m : res.mean) m /= n;
        std::vector<double> var(d, 0.0);
        for (std::size_t r = 0; r < train_features.rows(); ++r)
            for (std::size_t c = 0; c < d; ++c) {
                const double x = train_features(r, c) - res.mean[c];
                var[c] += x * x;
            }
        for (std::size_t c = 0; c < d; ++c) {
            const double sd = std::sqrt(var[c] / n);
            // constant features stay at zero after centering
            res.scale[c] = sd > 1e-12 ? 1.0 / sd : 1.0;
        }
    } else if (scaling == ProbeScaling::GlobalRms) {
        double ss = 0.0;
        for (double v : train_features.values) ss += v * v;
        const double rms = std::sqrt(ss / static_cast<double>(train_features.size()));
        res.scale.assign(d, rms > 1e-300 ? 1.0 / rms : 1.0);
    }
    auto standardize = [&](const Tensor& f) {
        Tensor out = f;
        for (std::size_t r = 0; r < out.rows(); ++r) {
            double* p = out.row(r);
            for (std::size_t c = 0; c < d; ++c) p[c] = (p[c] - res.mean[c]) * res.scale[c];
        }
        return out;
    };
    const Tensor xs = standardize(train_features);
    const Tensor xt = standardize(test_features);

    // zero init: logistic regression is convex, so no symmetry to break
    res.probe = ModelGraph(nn::Topology::Mlp, d, {nn::make_chain("probe", 0, d, {num_classes}, nn::LayerKind::ReLU, std::nullopt)},
                           nn::Chain{"head", 0, num_classes, {}});
    auto sres = train_supervised(res.probe, xs, train_labels, cfg);
    res.metrics = std::move(sres.metrics);
    res.train_accuracy = sres.train_accuracy;
    res.test_accuracy = test_features.rows() > 0 ? accuracy(res.probe, xt, test_labels) : 0.0;
    res.metrics.push_back({res.metrics.empty() ? 0 : res.metrics.back().step, "test_accuracy", res.test_accuracy});
    return res;
}

ProbeResult train_probe(const FeatureExtractor& extractor, const Dataset& train, const Dataset& test, Target target,
                        const TrainConfig& cfg, ProbeScaling scaling) {
    if (train.params.num_classes != test.params.num_classes) throw ConfigError("train/test class counts differ");
    const Tensor ftr = guarded("feature extraction", 0, [&] { return extractor.features(dataset_inputs(train)); });
    const Tensor fte = guarded("feature extraction", 0, [&] { return extractor.features(dataset_inputs(test)); });
    return train_probe(ftr, dataset_labels(train, target), fte, dataset_labels(test, target), train.params.num_classes,
                       cfg, scaling);
}

// ---- autoencoder ----------------------------------------------------------------

AutoencoderResult train_autoencoder(ModelGraph model, const Tensor& train, const Tensor& heldout,
                                    const TrainConfig& cfg) {
    cfg.validate();
    if (train.rows() == 0 || heldout.rows() == 0) throw ConfigError("autoencoder needs train and held-out rows");
    if (model.output_width() != model.input_width()) throw ConfigError("autoencoder output must match its input");
    auto heldout_mse = [&] { return nn::loss_and_grad(LossKind::Mse, model.forward(heldout), heldout).loss; };

    Optimizer opt(cfg.optimizer);
    Batcher batches(train.rows(), cfg.batch_size, derive_seed(cfg.seed, {0xae}));
    std::vector<double> curve{guarded("autoencoder", 0, heldout_mse)};
    Metrics metrics{{0, "heldout_mse", curve.back()}};
    std::size_t step = 0;
    for (std::size_t ep = 0; ep < cfg.epochs; ++ep) {
        double sum = 0.0;
        for (std::size_t b = 0; b < batches.batches_per_epoch(); ++b) {
            const Tensor x = nn::gather_rows(train, batches.next());
            double loss = 0.0;
            guarded("autoencoder", step, [&] {
                nn::backward(model, LossKind::Mse, x, x, &loss);
                return 0;
            });
            opt.step(model);
            sum += loss;
            ++step;
        }
        metrics.push_back({step, "train_mse", sum / static_cast<double>(batches.batches_per_epoch())});
        curve.push_back(guarded("autoencoder", step, heldout_mse));
        metrics.push_back({step, "heldout_mse", curve.back()});
    }
    FeatureExtractor fx(model);
    AutoencoderResult res{std::move(model), std::move(fx), std::move(metrics), curve, curve.front(), curve.back()};
    return res;
}

AutoencoderResult train_autoencoder(const Dataset& data, const TrainConfig& cfg) {
    if (data.size() < 2) throw ConfigError("autoencoder needs at least two examples");
    const Tensor all = dataset_inputs(data);
    const std::size_t hold = std::clamp<std::size_t>(data.size() / 10, 1, 500);
    std::vector<std::size_t> tr(data.size() - hold), ho(hold);
    std::iota(tr.begin(), tr.end(), std::size_t{0});
    std::iota(ho.begin(), ho.end(), data.size() - hold);
    return train_autoencoder(nn::make_autoencoder(derive_seed(cfg.seed, {0xae, 1}), all.cols()),
                             nn::gather_rows(all, tr), nn::gather_rows(all, ho), cfg);
}

// ---- adversarial ----------------------------------------------------------------

const char* gan_actor_name(GanActor a) { return a == GanActor::D ? "D" : "G"; }

Tensor sample_noise(std::size_t rows, std::size_t dim, Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Tensor z({rows, dim});
    for (double& v : z.values) v = u(rng);
    return z;
}

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

Tensor stack(const Tensor& a, const Tensor& b) {
    Tensor out({a.rows() + b.rows(), a.cols()});
    std::copy(a.values.begin(), a.values.end(), out.values.begin());
    std::copy(b.values.begin(), b.values.end(), out.values.begin() + static_cast<std::ptrdiff_t>(a.size()));
    return out;
}

struct Scores {
    double d_loss;
    double g_loss;
};

/// d/g losses from D's outputs on real rows and fake rows.
Scores score(const double* real, std::size_t nr, const double* fake, std::size_t nf, bool wasserstein) {
    if (wasserstein) {
        double mr = 0.0, mf = 0.0;
        for (std::size_t i = 0; i < nr; ++i) mr += real[i];
        for (std::size_t i = 0; i < nf; ++i) mf += fake[i];
        mr /= static_cast<double>(nr);
        mf /= static_cast<double>(nf);
        return {mf - mr, -mf};
    }
    double d = 0.0, g = 0.0;
    for (std::size_t i = 0; i < nr; ++i) d += softplus(-real[i]);
    for (std::size_t i = 0; i < nf; ++i) {
        d += softplus(fake[i]);
        g += softplus(-fake[i]);
    }
    return {d / static_cast<double>(nr + nf), g / static_cast<double>(nf)};
}

GanResult run_adversarial(const Tensor& real, ModelGraph g, ModelGraph d, const TrainConfig& cfg, bool wasserstein) {
    cfg.validate();
    const char* what = wasserstein ? "wgan" : "gan";
    if (real.rows() == 0) throw ConfigError("no real examples");
    if (g.input_width() != cfg.noise_dim) throw ConfigError("generator input width differs from noise dim");
    if (g.output_width() != real.cols()) throw ConfigError("generator output width differs from data width");
    if (d.input_width() != real.cols() || d.output_width() != 1) throw ConfigError("discriminator must map data to one logit");

    Rng rng(derive_seed(cfg.seed, {wasserstein ? 0x3a2u : 0x3a1u}));
    Optimizer opt_d(cfg.optimizer), opt_g(cfg.optimizer);
    Batcher batches(real.rows(), cfg.batch_size, derive_seed(cfg.seed, {wasserstein ? 0x3b2u : 0x3b1u}));
    if (wasserstein) d.clip_parameters(cfg.wgan_clip);

    const std::size_t budget = cfg.epochs * batches.batches_per_epoch();
    const LossKind loss = wasserstein ? LossKind::WassersteinLinear : LossKind::SigmoidBce;
    const double fake_target = wasserstein ? -1.0 : 0.0;

    GanResult res{ModelGraph(), ModelGraph(), FeatureExtractor(d), {}, {}};
    std::size_t step = 0, d_steps = 0;
    double epoch_d = 0.0, epoch_g = 0.0;
    std::size_t epoch_n = 0;

    auto record = [&](GanActor actor, Scores s) {
        ++step;
        res.trace.push_back({step, actor, s.d_loss, s.g_loss});
        epoch_d += s.d_loss;
        epoch_g += s.g_loss;
        ++epoch_n;
    };

    auto d_step = [&] {
        const Tensor xr = nn::gather_rows(real, batches.next());
        const std::size_t nr = xr.rows();
        const Tensor xf = g.forward(sample_noise(nr, cfg.noise_dim, rng));
        Tensor targets({2 * nr, 1}, 1.0);
        for (std::size_t i = nr; i < 2 * nr; ++i) targets.values[i] = fake_target;
        d.zero_grad();
        const Tensor out = d.forward_train(stack(xr, xf));
        d.backward(nn::loss_and_grad(loss, out, targets).grad);
        opt_d.step(d);
        if (wasserstein) d.clip_parameters(cfg.wgan_clip);
        ++d_steps;
        record(GanActor::D, score(out.values.data(), nr, out.values.data() + nr, nr, wasserstein));
    };

    auto g_step = [&] {
        const std::size_t nf = std::min(cfg.batch_size, real.rows());
        g.zero_grad();
        const Tensor xf = g.forward_train(sample_noise(nf, cfg.noise_dim, rng));
        d.zero_grad();
        const Tensor out = d.forward_train(xf);
        // G wants D to call its samples real
        const Tensor targets({nf, 1}, 1.0);
        const Tensor gx = d.backward(nn::loss_and_grad(loss, out, targets).grad, true);
        g.backward(gx);
        opt_g.step(g);
        const Tensor outr = d.forward(nn::gather_rows(real, batches.peek()));
        record(GanActor::G, score(outr.values.data(), outr.rows(), out.values.data(), nf, wasserstein));
    };

    auto current_d_loss = [&] {
        const Tensor xr = nn::gather_rows(real, batches.peek());
        Rng peek_rng = rng;
        const Tensor xf = g.forward(sample_noise(xr.rows(), cfg.noise_dim, peek_rng));
        const Tensor o = d.forward(stack(xr, xf));
        return score(o.values.data(), xr.rows(), o.values.data() + xr.rows(), xr.rows(), wasserstein).d_loss;
    };

    const std::size_t per_epoch = batches.batches_per_epoch();
    std::size_t next_epoch_mark = per_epoch;
    auto close_epochs = [&] {
        while (d_steps >= next_epoch_mark || (cfg.balance.kind == BalanceKind::LossThreshold && step >= next_epoch_mark * 2)) {
            if (epoch_n > 0) {
                res.metrics.push_back({step, "d_loss", epoch_d / static_cast<double>(epoch_n)});
                res.metrics.push_back({step, "g_loss", epoch_g / static_cast<double>(epoch_n)});
            }
            epoch_d = epoch_g = 0.0;
            epoch_n = 0;
            next_epoch_mark += per_epoch;
        }
    };

    guarded(what, step, [&] {
        if (cfg.balance.kind == BalanceKind::FixedAlternation) {
            const std::size_t kd = wasserstein ? cfg.critic_steps : cfg.balance.d_steps;
            const std::size_t kg = cfg.balance.g_steps;
            while (d_steps < budget) {
                for (std::size_t i = 0; i < kd && d_steps < budget; ++i) d_step();
                for (std::size_t i = 0; i < kg && d_steps < budget; ++i) g_step();
                close_epochs();
            }
        } else {
            // same total step count as 1:1 alternation
            while (step < 2 * budget) {
                if (current_d_loss() > cfg.balance.tau_d) {
                    d_step();
                } else {
                    g_step();
                }
                close_epochs();
            }
        }
        return 0;
    });
    if (epoch_n > 0) {
        res.metrics.push_back({step, "d_loss", epoch_d / static_cast<double>(epoch_n)});
        res.metrics.push_back({step, "g_loss", epoch_g / static_cast<double>(epoch_n)});
    }
    res.extractor = FeatureExtractor(d);
    res.generator = std::move(g);
    res.discriminator = std::move(d);
    return res;
}

}  // namespace

GanResult train_gan(const Tensor& real, ModelGraph generator, ModelGraph discriminator, const TrainConfig& cfg) {
    return run_adversarial(real, std::move(generator), std::move(discriminator), cfg, false);
}

GanResult train_wgan(const Tensor& real, ModelGraph generator, ModelGraph critic, const TrainConfig& cfg) {
    if (critic.topology() != nn::Topology::Critic) throw ConfigError("train_wgan needs a critic topology");
    return run_adversarial(real, std::move(generator), std::move(critic), cfg, true);
}

GanResult train_gan(const Dataset& data, const TrainConfig& cfg) {
    const Tensor real = dataset_inputs(data);
    return train_gan(real, nn::make_generator(derive_seed(cfg.seed, {0x6a, 0}), cfg.noise_dim, 128, real.cols()),
                     nn::make_discriminator(derive_seed(cfg.seed, {0x6a, 1}), real.cols()), cfg);
}

GanResult train_wgan(const Dataset& data, const TrainConfig& cfg) {
    const Tensor real = dataset_inputs(data);
    return train_wgan(real, nn::make_generator(derive_seed(cfg.seed, {0x6b, 0}), cfg.noise_dim, 128, real.cols()),
                      nn::make_discriminator(derive_seed(cfg.seed, {0x6b, 1}), real.cols(), 128, 100,
                                             nn::Topology::Critic),
                      cfg);
}

DiscriminatorEval evaluate_discriminator(const ModelGraph& d, const Tensor& real, const Tensor& fake) {
    if (real.rows() == 0 || fake.rows() == 0) throw ConfigError("evaluation needs real and fake rows");
    const Tensor orr = d.forward(real), of = d.forward(fake);
    double hit = 0.0, br = 0.0, bf = 0.0;
    for (double z : orr.values) {
        hit += z > 0.0 ? 1.0 : (z == 0.0 ? 0.5 : 0.0);
        br += softplus(-z);
    }
    for (double z : of.values) {
        hit += z < 0.0 ? 1.0 : (z == 0.0 ? 0.5 : 0.0);
        bf += softplus(z);
    }
    const double nr = static_cast<double>(orr.rows()), nf = static_cast<double>(of.rows());
    return {hit / (nr + nf), br / nr + bf / nf};
}

void write_gan_trace_csv(std::ostream& out, const std::vector<GanStep>& trace) {
    out << "step,actor,d_loss,g_loss\n";
    char buf[96];
    for (const auto& s : trace) {
        std::snprintf(buf, sizeof buf, "%zu,%s,%.10g,%.10g\n", s.step, gan_actor_name(s.actor), s.d_loss, s.g_loss);
        out << buf;
    }
}

}  // namespace featcomp::train
