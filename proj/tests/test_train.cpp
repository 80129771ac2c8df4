#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "featcomp/data.hpp"
#include "featcomp/nn.hpp"
#include "featcomp/train.hpp"

using namespace featcomp;
using namespace featcomp::train;
using nn::LayerKind;
using nn::ModelGraph;
using nn::Tensor;
using nn::Topology;

namespace {

const DigitBank& bank() {
    static const DigitBank b = synth_bank(10, 200, 14, 77);
    return b;
}

Dataset cell(double rho_l, double rho_r, std::size_t n, std::uint64_t seed, Split split) {
    return gen_dataset(bank(), CorruptionParams{rho_l, rho_r, 10}, n, seed, split);
}

TrainConfig quick(std::size_t epochs, std::uint64_t seed = 1) {
    TrainConfig c;
    c.epochs = epochs;
    c.seed = seed;
    return c;
}

double max_abs_param(const ModelGraph& m) {
    double best = 0.0;
    for (const auto& p : m.parameter_values())
        for (double v : p.value.values) best = std::max(best, std::abs(v));
    return best;
}

// Real rows in [0.8, 1]; a fresh sigmoid generator sits near 0.5.
Tensor bright_rows(std::size_t n, std::size_t w, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.8, 1.0);
    Tensor t({n, w});
    for (double& v : t.values) v = u(rng);
    return t;
}

}  // namespace

TEST_CASE("config validation and balance parsing") {
    TrainConfig c;
    c.batch_size = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.wgan_clip = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    auto b = GanBalance::parse("fixed:2:1");
    CHECK(b.kind == BalanceKind::FixedAlternation);
    CHECK(b.d_steps == 2);
    CHECK(b.g_steps == 1);
    CHECK(GanBalance::parse(b.name()).d_steps == 2);
    auto t = GanBalance::parse("threshold:0.5");
    CHECK(t.kind == BalanceKind::LossThreshold);
    CHECK(t.tau_d == 0.5);
    CHECK_THROWS_AS(GanBalance::parse("fixed:0:0"), ConfigError);
    CHECK_THROWS_AS(GanBalance::parse("greedy"), ConfigError);
}

TEST_CASE("supervised training") {
    const Dataset train = cell(1.0, 0.0, 2000, 3, Split::Train);

    SUBCASE("zero learning rate leaves parameters unchanged") {
        ModelGraph m = nn::make_twin_mlp(9);
        const ModelGraph before = m;
        TrainConfig c = quick(1);
        c.optimizer.learning_rate = 0.0;
        train_supervised(m, train, c);
        CHECK(m.same_parameters(before));
    }
    SUBCASE("same seed twice gives identical parameters") {
        ModelGraph a = nn::make_twin_mlp(9), b = nn::make_twin_mlp(9);
        const auto ra = train_supervised(a, train, quick(1, 4));
        const auto rb = train_supervised(b, train, quick(1, 4));
        CHECK(a.same_parameters(b));
        CHECK(ra.epoch_loss == rb.epoch_loss);
        ModelGraph c = nn::make_twin_mlp(9);
        train_supervised(c, train, quick(1, 5));
        CHECK_FALSE(a.same_parameters(c));
    }
    SUBCASE("left digit is learnable") {
        ModelGraph m = nn::make_twin_mlp(9);
        const auto r = train_supervised(m, cell(1.0, 0.0, 8000, 3, Split::Train), quick(5));
        MESSAGE("train accuracy " << r.train_accuracy);
        CHECK(r.train_accuracy >= 0.90);
        REQUIRE(r.epoch_loss.size() == 5);
        CHECK(r.epoch_loss.back() < r.epoch_loss.front());
    }
    SUBCASE("errors") {
        ModelGraph m = nn::make_twin_mlp(9);
        CHECK_THROWS_AS(train_supervised(m, Tensor({3, 392}), {0, 1}, quick(1)), ConfigError);
        CHECK_THROWS_AS(train_supervised(m, Tensor({2, 392}), {0, 10}, quick(1)), ConfigError);
        TrainConfig wild = quick(3);
        wild.optimizer = {nn::OptimizerKind::Sgd, 1e12};
        wild.batch_size = 1;
        CHECK_THROWS_AS(train_supervised(m, Tensor({2, 392}, 1e150), {0, 1}, wild), DivergenceError);
    }
}

TEST_CASE("probe") {
    SUBCASE("one-hot features of the target") {
        Rng rng(3);
        std::vector<std::size_t> ytr(2000), yte(500);
        for (auto& y : ytr) y = rng() % 10;
        for (auto& y : yte) y = rng() % 10;
        auto onehot = [](const std::vector<std::size_t>& y) {
            Tensor f({y.size(), 10});
            for (std::size_t i = 0; i < y.size(); ++i) f(i, y[i]) = 1.0;
            return f;
        };
        const auto r = train_probe(onehot(ytr), ytr, onehot(yte), yte, 10, quick(10));
        CHECK(r.test_accuracy >= 0.99);
    }
    SUBCASE("constant features sit at chance") {
        Rng rng(8);
        const std::size_t n = 4000;
        std::vector<std::size_t> ytr(n), yte(n);
        for (auto& y : ytr) y = rng() % 10;
        for (auto& y : yte) y = rng() % 10;
        const Tensor f({n, 6}, 0.7);
        const auto r = train_probe(f, ytr, f, yte, 10, quick(5));
        // a constant input can only ever predict one class, which holds ~1/10 of the test labels
        const double sigma = std::sqrt(0.1 * 0.9 / n);
        CHECK(std::abs(r.test_accuracy - 0.1) <= 3 * sigma);
    }
    SUBCASE("untrained extractor beats chance and stays frozen") {
        const auto ex = untrained_extractor(Topology::TwinMlp, 11, 392);
        const ModelGraph before = ex.graph();
        const auto r = train_probe(ex, cell(1.0, 0.0, 3000, 5, Split::Train), cell(1.0, 0.0, 1000, 6, Split::Test),
                                   Target::Right, quick(5));
        MESSAGE("untrained probe accuracy " << r.test_accuracy);
        CHECK(r.test_accuracy > 0.1 + 3 * std::sqrt(0.09 / 1000));
        CHECK(r.test_accuracy <= 1.0);
        CHECK(ex.graph().same_parameters(before));
        CHECK(ex.width() == 100);
    }
    SUBCASE("scaling modes ignore a power-of-two rescale") {
        Rng rng(21);
        std::normal_distribution<double> noise(0.0, 1.0);
        auto make = [&](std::vector<std::size_t>& y, std::size_t n) {
            y.resize(n);
            Tensor f({n, 5});
            for (std::size_t i = 0; i < n; ++i) {
                y[i] = rng() % 4;
                for (std::size_t c = 0; c < 5; ++c) f(i, c) = noise(rng) + (c == y[i] ? 1.5 : 0.0);
            }
            return f;
        };
        std::vector<std::size_t> ytr, yte;
        const Tensor ftr = make(ytr, 800), fte = make(yte, 200);
        Tensor gtr = ftr, gte = fte;
        for (double& v : gtr.values) v *= 4.0;
        for (double& v : gte.values) v *= 4.0;
        for (auto mode : {ProbeScaling::Standardize, ProbeScaling::GlobalRms}) {
            const auto a = train_probe(ftr, ytr, fte, yte, 4, quick(3), mode);
            const auto b = train_probe(gtr, ytr, gte, yte, 4, quick(3), mode);
            CHECK(a.test_accuracy == b.test_accuracy);
            CHECK(a.test_accuracy > 0.5);
            CHECK(parse_probe_scaling(probe_scaling_name(mode)) == mode);
        }
        CHECK_THROWS_AS(parse_probe_scaling("minmax"), ConfigError);
    }
    SUBCASE("shape mismatch") {
        CHECK_THROWS_AS(train_probe(Tensor({4, 3}), {0, 1, 2, 3}, Tensor({2, 4}), {0, 1}, 4, quick(1)),
                        nn::ShapeError);
    }
}

TEST_CASE("autoencoder") {
    SUBCASE("memorizes four vectors") {
        const Tensor x({4, 4}, std::vector<double>{0.9, 0.1, 0.1, 0.1, 0.1, 0.9, 0.1, 0.1,  //
                                                   0.1, 0.1, 0.9, 0.1, 0.1, 0.1, 0.1, 0.9});
        ModelGraph m = nn::make_autoencoder(2, 4, 16, 8);
        TrainConfig c = quick(3000);
        c.batch_size = 4;
        c.optimizer.learning_rate = 1e-2;
        const auto r = train_autoencoder(m, x, x, c);
        MESSAGE("final mse " << r.final_mse);
        CHECK(r.final_mse < 1e-4);
        CHECK(r.extractor.width() == 8);
    }
    SUBCASE("zero learning rate keeps the loss flat") {
        const Dataset d = cell(1.0, 0.0, 600, 2, Split::Train);
        TrainConfig c = quick(3);
        c.optimizer.learning_rate = 0.0;
        const auto r = train_autoencoder(d, c);
        for (double v : r.heldout_mse) CHECK(v == r.heldout_mse.front());
    }
    SUBCASE("desk-scale run halves the held-out error") {
        const auto r = train_autoencoder(cell(1.0, 0.0, 8000, 2, Split::Train), quick(5));
        MESSAGE("mse " << r.initial_mse << " -> " << r.final_mse);
        CHECK(r.final_mse < 0.5 * r.initial_mse);
        CHECK(r.extractor.width() == 100);
    }
}

TEST_CASE("gan") {
    const std::size_t w = 20;
    const Tensor real = bright_rows(512, w, 4);

    SUBCASE("discriminator alone separates real from generator output") {
        TrainConfig c = quick(40);
        c.optimizer.learning_rate = 1e-2;
        c.balance = GanBalance::parse("fixed:1:0");
        c.noise_dim = 8;
        const auto r = train_gan(real, nn::make_generator(1, 8, 16, w), nn::make_discriminator(2, w, 16, 8), c);
        MESSAGE("final d_loss " << r.trace.back().d_loss);
        CHECK(r.trace.back().d_loss < 0.1);
        for (const auto& s : r.trace) CHECK(s.actor == GanActor::D);
    }
    SUBCASE("identical batches force confusion") {
        const auto ev = evaluate_discriminator(nn::make_discriminator(3, w, 16, 8), real, real);
        CHECK(ev.accuracy == doctest::Approx(0.5));
        // with D near zero logits the value sits at log 4; an arbitrary D can only do worse on identical inputs
        CHECK(ev.value_nats >= std::log(4.0) - 1e-12);
        ModelGraph flat = nn::make_discriminator(3, w, 16, 8);
        for (auto& p : flat.parameters()) std::fill(p.value->values.begin(), p.value->values.end(), 0.0);
        CHECK(evaluate_discriminator(flat, real, real).value_nats == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    }
    SUBCASE("alternating run records both actors and is reproducible") {
        TrainConfig c = quick(2);
        c.noise_dim = 8;
        const auto a = train_gan(real, nn::make_generator(1, 8, 16, w), nn::make_discriminator(2, w, 16, 8), c);
        const auto b = train_gan(real, nn::make_generator(1, 8, 16, w), nn::make_discriminator(2, w, 16, 8), c);
        std::ostringstream sa, sb;
        write_gan_trace_csv(sa, a.trace);
        write_gan_trace_csv(sb, b.trace);
        CHECK(sa.str() == sb.str());
        CHECK(sa.str().rfind("step,actor,d_loss,g_loss\n", 0) == 0);
        bool saw_g = false;
        for (const auto& s : a.trace) saw_g |= s.actor == GanActor::G;
        CHECK(saw_g);
        CHECK(a.discriminator.same_parameters(b.discriminator));
    }
    SUBCASE("threshold balance switches actor on the loss") {
        TrainConfig c = quick(2);
        c.noise_dim = 8;
        c.balance = GanBalance::parse("threshold:0.6931471805599453");
        const auto r = train_gan(real, nn::make_generator(1, 8, 16, w), nn::make_discriminator(2, w, 16, 8), c);
        // D only ever trains from a loss above the threshold
        for (const auto& s : r.trace)
            if (s.actor == GanActor::D) CHECK(s.d_loss > c.balance.tau_d);
        CHECK(r.trace.size() == 2 * c.epochs * (512 / c.batch_size));
    }
}

TEST_CASE("wgan") {
    const std::size_t w = 20;
    const Tensor real = bright_rows(512, w, 6);

    SUBCASE("critic weights stay clipped") {
        TrainConfig c = quick(2);
        c.noise_dim = 8;
        c.optimizer.learning_rate = 5e-3;
        const auto r = train_wgan(real, nn::make_generator(1, 8, 16, w),
                                  nn::make_discriminator(2, w, 16, 8, Topology::Critic), c);
        CHECK(max_abs_param(r.discriminator) <= c.wgan_clip);
    }
    SUBCASE("critic alone widens the score gap") {
        TrainConfig c = quick(10);
        c.noise_dim = 8;
        c.balance = GanBalance::parse("fixed:1:0");
        const auto r = train_wgan(real, nn::make_generator(1, 8, 16, w),
                                  nn::make_discriminator(2, w, 16, 8, Topology::Critic), c);
        // d_loss = fake - real score, so a growing gap means a falling d_loss
        CHECK(r.trace.back().d_loss < r.trace.front().d_loss);
        CHECK(r.trace.back().d_loss < 0.0);
    }
    SUBCASE("a discriminator topology is rejected") {
        CHECK_THROWS_AS(train_wgan(real, nn::make_generator(1, 8, 16, w), nn::make_discriminator(2, w, 16, 8), quick(1)),
                        ConfigError);
    }
}
