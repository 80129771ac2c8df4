#pragma once
// Training loops: supervised twin MLP, frozen-feature probe, autoencoder, GAN and WGAN.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "featcomp/data.hpp"
#include "featcomp/nn.hpp"

namespace featcomp::train {

using nn::ModelGraph;
using nn::Tensor;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A loss or activation went non-finite mid-run.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class BalanceKind { FixedAlternation, LossThreshold };

/// fixed:<kD>:<kG> alternates kD discriminator steps with kG generator steps.
/// threshold:<tau> trains D while its mean bce exceeds tau, G otherwise.
struct GanBalance {
    BalanceKind kind = BalanceKind::FixedAlternation;
    std::size_t d_steps = 1;
    std::size_t g_steps = 1;
    double tau_d = std::log(2.0);

    static GanBalance parse(std::string_view text);
    std::string name() const;
};

struct TrainConfig {
    nn::OptimizerConfig optimizer;
    std::size_t batch_size = 64;
    std::size_t epochs = 5;
    std::uint64_t seed = 0;
    double wgan_clip = 0.01;
    std::size_t critic_steps = 5;
    GanBalance balance;
    std::size_t noise_dim = 64;

    void validate() const;
};

struct MetricRow {
    std::size_t step;
    std::string metric;
    double value;
};
using Metrics = std::vector<MetricRow>;

/// `step,metric,value`
void write_metrics_csv(std::ostream& out, const Metrics& metrics);

/// Rows of [x_l, x_r].
Tensor dataset_inputs(const Dataset& d);

enum class Target { Left, Right };
std::vector<std::size_t> dataset_labels(const Dataset& d, Target target);

/// Frozen copy of a model's body. The feature layer is the body output (the penultimate layer).
class FeatureExtractor {
public:
    explicit FeatureExtractor(const ModelGraph& model) : body_(model.body_only()) {}

    Tensor features(const Tensor& x) const { return body_.features(x); }
    std::size_t input_width() const noexcept { return body_.input_width(); }
    std::size_t width() const noexcept { return body_.feature_width(); }
    const ModelGraph& graph() const noexcept { return body_; }

private:
    ModelGraph body_;
};

/// Same architecture and init distribution as the trained model of that topology, never trained.
FeatureExtractor untrained_extractor(nn::Topology topology, std::uint64_t seed, std::size_t input_width,
                                     std::size_t num_classes = 10);

struct SupervisedResult {
    Metrics metrics;
    std::vector<double> epoch_loss;
    double train_accuracy = 0.0;
};

/// Trains `model` on y_l with softmax cross-entropy.
SupervisedResult train_supervised(ModelGraph& model, const Dataset& data, const TrainConfig& cfg);
SupervisedResult train_supervised(ModelGraph& model, const Tensor& inputs, const std::vector<std::size_t>& labels,
                                  const TrainConfig& cfg);

struct ProbeResult {
    ModelGraph probe;
    std::vector<double> mean;
    std::vector<double> scale;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    Metrics metrics;
};

/// How probe inputs are rescaled, always from training-set statistics.
/// standardize: per-feature z-score. global-rms: one shared factor, 1 / rms over all entries, so the
/// relative magnitudes the extractor produced survive. none: raw features.
enum class ProbeScaling { Standardize, GlobalRms, None };
const char* probe_scaling_name(ProbeScaling s);
ProbeScaling parse_probe_scaling(std::string_view name);

/// Multinomial logistic regression on rescaled features, zero-initialized.
ProbeResult train_probe(const Tensor& train_features, const std::vector<std::size_t>& train_labels,
                        const Tensor& test_features, const std::vector<std::size_t>& test_labels,
                        std::size_t num_classes, const TrainConfig& cfg,
                        ProbeScaling scaling = ProbeScaling::Standardize);
ProbeResult train_probe(const FeatureExtractor& extractor, const Dataset& train, const Dataset& test, Target target,
                        const TrainConfig& cfg, ProbeScaling scaling = ProbeScaling::Standardize);

struct AutoencoderResult {
    ModelGraph model;
    FeatureExtractor extractor;
    Metrics metrics;
    std::vector<double> heldout_mse;  // before training, then after each epoch
    double initial_mse = 0.0;
    double final_mse = 0.0;
};

AutoencoderResult train_autoencoder(ModelGraph model, const Tensor& train, const Tensor& heldout,
                                    const TrainConfig& cfg);
/// Default architecture; the last tenth of the examples (at most 500) is held out.
AutoencoderResult train_autoencoder(const Dataset& data, const TrainConfig& cfg);

enum class GanActor { D, G };
const char* gan_actor_name(GanActor a);

struct GanStep {
    std::size_t step;
    GanActor actor;
    double d_loss;
    double g_loss;
};

struct GanResult {
    ModelGraph generator;
    ModelGraph discriminator;
    FeatureExtractor extractor;
    std::vector<GanStep> trace;
    Metrics metrics;
};

/// GAN: d_loss is the mean sigmoid-bce over the joint real+fake batch, g_loss the non-saturating -log D(G(z)).
GanResult train_gan(const Tensor& real, ModelGraph generator, ModelGraph discriminator, const TrainConfig& cfg);
GanResult train_gan(const Dataset& data, const TrainConfig& cfg);

/// WGAN: d_loss = mean critic(fake) - mean critic(real); critic parameters clipped after every critic step.
/// cfg.critic_steps replaces balance.d_steps; balance.g_steps = 0 trains the critic alone.
GanResult train_wgan(const Tensor& real, ModelGraph generator, ModelGraph critic, const TrainConfig& cfg);
GanResult train_wgan(const Dataset& data, const TrainConfig& cfg);

struct DiscriminatorEval {
    double accuracy;    // logit > 0 on real, < 0 on fake; ties count half
    double value_nats;  // mean bce on real + mean bce on fake
};
DiscriminatorEval evaluate_discriminator(const ModelGraph& d, const Tensor& real, const Tensor& fake);

/// `step,actor,d_loss,g_loss`
void write_gan_trace_csv(std::ostream& out, const std::vector<GanStep>& trace);

/// Uniform(-1,1) noise rows.
Tensor sample_noise(std::size_t rows, std::size_t dim, Rng& rng);

}  // namespace featcomp::train
