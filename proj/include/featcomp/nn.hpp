#pragma once
// Dense networks with hand-written reverse mode: tensors, layers, model graphs, losses, optimizers, checkpoints.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "featcomp/rng.hpp"

namespace featcomp::nn {

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an activation, loss or gradient stops being finite.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> values;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
    Tensor(std::vector<std::size_t> shape, std::vector<double> values);

    std::size_t size() const noexcept { return values.size(); }
    /// Leading dimension; the rest is flattened into cols().
    std::size_t rows() const noexcept { return shape.empty() ? 0 : shape[0]; }
    std::size_t cols() const noexcept { return rows() == 0 ? 0 : values.size() / rows(); }
    double* row(std::size_t r) noexcept { return values.data() + r * cols(); }
    const double* row(std::size_t r) const noexcept { return values.data() + r * cols(); }
    double& operator()(std::size_t r, std::size_t c) noexcept { return values[r * cols() + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return values[r * cols() + c]; }

    bool operator==(const Tensor&) const = default;
};

/// Rows `idx` of a matrix, in order.
Tensor gather_rows(const Tensor& m, const std::vector<std::size_t>& idx);

enum class LayerKind : std::uint8_t { Dense = 0, ReLU = 1, Sigmoid = 2, Tanh = 3 };

const char* layer_name(LayerKind kind);

struct Layer {
    LayerKind kind = LayerKind::Dense;
    std::size_t in = 0;
    std::size_t out = 0;
    Tensor weight;  // out x in, dense only
    Tensor bias;    // out, dense only
    Tensor grad_weight;
    Tensor grad_bias;

    // training caches
    Tensor cache_in;
    Tensor cache_out;
};

Layer dense(std::size_t in, std::size_t out);
Layer activation(LayerKind kind, std::size_t width);

/// A sequential stack reading columns [offset, offset + in) of the graph input.
struct Chain {
    std::string name;
    std::size_t offset = 0;
    std::size_t in = 0;
    std::vector<Layer> layers;

    std::size_t out() const noexcept { return layers.empty() ? in : layers.back().out; }
};

/// Dense layers of the given widths, each followed by `act`; the last one by `last` (or nothing).
Chain make_chain(std::string name, std::size_t offset, std::size_t in, const std::vector<std::size_t>& sizes,
                 LayerKind act, std::optional<LayerKind> last);

enum class Topology : std::uint8_t { TwinMlp = 0, Mlp = 1, Autoencoder = 2, Generator = 3, Discriminator = 4, Critic = 5 };

const char* topology_name(Topology t);
Topology parse_topology(std::string_view name);

struct ParamRef {
    std::string name;
    Tensor* value;
    Tensor* grad;
};

struct NamedTensor {
    std::string name;
    Tensor value;
};

/// Body = parallel chains over slices of the input, outputs concatenated (the feature layer).
/// Head = one chain on top of the features; may be empty.
class ModelGraph {
public:
    ModelGraph() = default;
    ModelGraph(Topology topology, std::size_t input_width, std::vector<Chain> body, Chain head);

    Topology topology() const noexcept { return topology_; }
    std::size_t input_width() const noexcept { return input_width_; }
    std::size_t feature_width() const noexcept;
    std::size_t output_width() const noexcept;
    const std::vector<Chain>& body() const noexcept { return body_; }
    const Chain& head() const noexcept { return head_; }

    /// Pure evaluation; no caches touched.
    Tensor forward(const Tensor& x) const;
    /// Body output only.
    Tensor features(const Tensor& x) const;

    /// Caching forward for a subsequent backward().
    Tensor forward_train(const Tensor& x);
    /// Accumulates parameter gradients from d(loss)/d(output); returns d(loss)/d(input) when asked.
    Tensor backward(const Tensor& grad_out, bool want_input_grad = false);
    void zero_grad();

    std::vector<ParamRef> parameters();
    std::vector<NamedTensor> parameter_values() const;
    std::size_t parameter_count() const;
    /// Clamps every parameter into [-bound, bound].
    void clip_parameters(double bound);
    /// Copy of the body as a headless graph.
    ModelGraph body_only() const;

    bool same_parameters(const ModelGraph& other) const;

private:
    void check_input(const Tensor& x) const;

    Topology topology_ = Topology::Mlp;
    std::size_t input_width_ = 0;
    std::vector<Chain> body_;
    Chain head_;
};

/// Uniform He scaling: dense weights ~ U(-sqrt(6/in), sqrt(6/in)), biases 0.
void init_he_uniform(ModelGraph& model, Rng& rng);

// Default architectures. All are He-uniform initialized from `seed`.
ModelGraph make_twin_mlp(std::uint64_t seed, std::size_t half_width = 196, std::size_t hidden = 128,
                         std::size_t branch_out = 50, std::size_t num_classes = 10);
ModelGraph make_autoencoder(std::uint64_t seed, std::size_t input = 392, std::size_t hidden = 128,
                            std::size_t code = 100);
ModelGraph make_generator(std::uint64_t seed, std::size_t noise = 64, std::size_t hidden = 128,
                          std::size_t output = 392);
ModelGraph make_discriminator(std::uint64_t seed, std::size_t input = 392, std::size_t hidden = 128,
                              std::size_t feature = 100, Topology topology = Topology::Discriminator);

// ---- losses ---------------------------------------------------------------

enum class LossKind { SoftmaxXent, SigmoidBce, Mse, WassersteinLinear };

const char* loss_name(LossKind kind);
LossKind parse_loss(std::string_view name);

struct LossResult {
    double loss = 0.0;
    Tensor grad;  // d(loss)/d(output)
};

/// Batch-mean losses. Targets share the output's shape: class distributions for softmax-xent,
/// probabilities for sigmoid-bce (outputs are logits), +1/-1 weights for wasserstein-linear.
LossResult loss_and_grad(LossKind kind, const Tensor& output, const Tensor& targets);

/// One forward/backward pass; returns the loss gradient for every parameter, in parameter order.
std::vector<NamedTensor> backward(ModelGraph& model, LossKind kind, const Tensor& batch, const Tensor& targets,
                                  double* loss_out = nullptr);

// ---- optimizers -----------------------------------------------------------

enum class OptimizerKind { Sgd, Adam };

const char* optimizer_name(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::Adam;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

class Optimizer {
public:
    explicit Optimizer(OptimizerConfig cfg);
    /// Applies the accumulated gradients of `model`.
    void step(ModelGraph& model);

private:
    OptimizerConfig cfg_;
    std::size_t t_ = 0;
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
};

// ---- checkpoints ----------------------------------------------------------

inline constexpr std::uint16_t kCheckpointVersion = 1;

/// Parameters are stored as f32, so a reload rounds them to single precision.
void save_model(const ModelGraph& model, const std::filesystem::path& path);
ModelGraph load_model(const std::filesystem::path& path);

}  // namespace featcomp::nn
