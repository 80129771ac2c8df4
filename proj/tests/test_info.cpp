#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "featcomp/information.hpp"
#include "featcomp/plugin.hpp"
#include "info_oracle.hpp"

using namespace featcomp;

namespace {

JointPMF fair_coins() {
    return JointPMF::product({{"a", 2}, {"b", 2}}, {{0.5, 0.5}, {0.5, 0.5}});
}

// X uniform over n symbols and an exact copy of it.
JointPMF copy_pair(std::size_t n) {
    std::vector<double> t(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) t[i * n + i] = 1.0 / static_cast<double>(n);
    return JointPMF({{"x", n}, {"x_copy", n}}, t);
}

std::vector<std::size_t> idx(const VarSelector& s) { return s.indices(); }

}  // namespace

TEST_CASE("JointPMF construction rejects malformed tables") {
    CHECK_THROWS_AS(JointPMF({{"a", 2}}, {0.5, 0.6}), PmfError);
    CHECK_THROWS_AS(JointPMF({{"a", 2}}, {1.5, -0.5}), PmfError);
    CHECK_THROWS_AS(JointPMF({{"a", 3}}, {0.5, 0.5}), PmfError);
    CHECK_THROWS_AS(JointPMF({{"a", 0}}, {}), PmfError);
    CHECK_THROWS_AS(JointPMF({{"a", 4}, {"b", 4}}, std::vector<double>(16, 1.0 / 16), 10), PmfError);
    CHECK_NOTHROW(JointPMF({{"a", 2}}, {0.25, 0.75}));
}

TEST_CASE("VarSelector rejects repeats") {
    CHECK_THROWS_AS(VarSelector({1, 1}), PmfError);
    CHECK(VarSelector({0, 1}).overlaps(VarSelector({1, 2})));
    CHECK_FALSE(VarSelector({0}).overlaps(VarSelector({1, 2})));
}

TEST_CASE("marginalize") {
    SUBCASE("product measure keeps first coin uniform") {
        auto m = marginalize(fair_coins(), {0});
        REQUIRE(m.cell_count() == 2);
        CHECK(m.table()[0] == doctest::Approx(0.5));
        CHECK(m.table()[1] == doctest::Approx(0.5));
    }
    SUBCASE("keeping every variable is the identity") {
        std::mt19937_64 rng(7);
        auto p = oracle::random_joint(rng, 3, 3, 5);
        CHECK(marginalize(p, {0, 1, 2}) == p);
    }
    SUBCASE("random 3-variable pmf matches nested-loop summation") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            auto p = oracle::random_joint(rng, 3, 3, 6);
            const auto& v = p.variables();
            auto m = marginalize(p, {0, 2});
            for (std::size_t a = 0; a < v[0].size; ++a) {
                for (std::size_t c = 0; c < v[2].size; ++c) {
                    double sum = 0.0;
                    for (std::size_t b = 0; b < v[1].size; ++b) {
                        std::size_t t[3] = {a, b, c};
                        sum += p.at(t);
                    }
                    std::size_t mt[2] = {a, c};
                    CHECK(m.at(mt) == sum);
                }
            }
        }
    }
    SUBCASE("selector order defines output order") {
        auto p = JointPMF({{"a", 2}, {"b", 3}}, {0.1, 0.2, 0.0, 0.3, 0.25, 0.15});
        auto m = marginalize(p, {1, 0});
        CHECK(m.variables()[0].name == "b");
        std::size_t t[2] = {2, 1};
        CHECK(m.at(t) == doctest::Approx(0.15));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(marginalize(fair_coins(), VarSelector{}), PmfError);
        CHECK_THROWS_AS(marginalize(fair_coins(), {2}), PmfError);
    }
}

TEST_CASE("entropy examples") {
    CHECK(entropy(JointPMF({{"c", 2}}, {0.5, 0.5}), {0}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(entropy(JointPMF({{"c", 3}}, {0.0, 1.0, 0.0}), {0}) == 0.0);
    std::vector<double> u10(10, 0.1);
    CHECK(entropy(JointPMF({{"d", 10}}, u10), {0}) == doctest::Approx(std::log2(10.0)).epsilon(1e-14));
    CHECK(entropy(fair_coins(), {0, 1}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(entropy(fair_coins(), {3}), PmfError);
}

TEST_CASE("entropy is bounded by log alphabet") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = oracle::random_joint(rng, 2, 4, 6);
        double cap = 0.0;
        for (const auto& v : p.variables()) cap += std::log2(static_cast<double>(v.size));
        const double h = entropy(p, VarSelector::range(0, p.arity()));
        CHECK(h >= 0.0);
        CHECK(h <= cap + 1e-12);
    }
}

TEST_CASE("conditional entropy") {
    CHECK(conditional_entropy(copy_pair(4), {0}, {1}) == 0.0);
    auto coins = fair_coins();
    CHECK(conditional_entropy(coins, {0}, {1}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(conditional_entropy(coins, {0}, {0}), PmfError);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        auto p = oracle::random_joint(rng, 3, 4, 5);
        VarSelector t{0}, g{1, 2};
        const double h = conditional_entropy(p, t, g);
        CHECK(h == doctest::Approx(oracle::H_cond(p, idx(t), idx(g))).epsilon(1e-9));
        CHECK(std::abs(h - (entropy(p, t.join(g)) - entropy(p, g))) <= 1e-12);
        CHECK(h <= entropy(p, t) + 1e-12);
    }
}

TEST_CASE("mutual information") {
    CHECK(mutual_information(fair_coins(), {0}, {1}) == 0.0);
    CHECK(mutual_information(copy_pair(5), {0}, {1}) == doctest::Approx(std::log2(5.0)).epsilon(1e-14));
    CHECK_THROWS_AS(mutual_information(fair_coins(), {0, 1}, {1}), PmfError);

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        auto p = oracle::random_joint(rng, 2, 4, 5);
        VarSelector a{0}, b = VarSelector::range(1, p.arity());
        const double mi = mutual_information(p, a, b);
        CHECK(mi >= 0.0);
        CHECK(std::abs(mi - oracle::I(p, idx(a), idx(b))) <= 1e-9);
        CHECK(std::abs(mi - mutual_information(p, b, a)) <= 1e-12);
        CHECK(std::abs(mi - (entropy(p, a) - conditional_entropy(p, a, b))) <= 1e-12);
    }
}

TEST_CASE("conditional mutual information") {
    auto p_copy = copy_pair(3);
    CHECK_THROWS_AS(conditional_mutual_information(p_copy, {0}, {1}, {0}), PmfError);

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        auto p = oracle::random_joint(rng, 4, 4, 4);
        VarSelector a{0}, b{1}, g{2, 3};
        const double cmi = conditional_mutual_information(p, a, b, g);
        CHECK(cmi >= 0.0);
        CHECK(std::abs(cmi - oracle::I_cond(p, idx(a), idx(b), idx(g))) <= 1e-9);
        CHECK(std::abs(cmi - (conditional_entropy(p, a, g) - conditional_entropy(p, a, b.join(g)))) <= 1e-12);
        CHECK(conditional_mutual_information(p, a, b, {}) == doctest::Approx(mutual_information(p, a, b)));
    }
}

TEST_CASE("conditioning on the target kills the signal") {
    // y, f correlated; I(y; f | y) = 0
    JointPMF p({{"y", 2}, {"f", 2}}, {0.4, 0.1, 0.1, 0.4});
    // selectors must be disjoint, so duplicate y explicitly
    JointPMF q({{"y", 2}, {"f", 2}, {"y_dup", 2}}, {0.4, 0.0, 0.1, 0.0, 0.0, 0.1, 0.0, 0.4});
    CHECK(conditional_mutual_information(q, {0}, {1}, {2}) == 0.0);
    CHECK(mutual_information(p, {0}, {1}) > 0.0);
}

TEST_CASE("signal sequence") {
    SUBCASE("single feature identical to y") {
        auto s = signal_sequence(copy_pair(4), {0}, {{1}});
        REQUIRE(s.size() == 1);
        CHECK(s[0] == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("features independent of y") {
        auto p = JointPMF::product({{"y", 3}, {"f1", 2}, {"f2", 2}},
                                   {{0.2, 0.3, 0.5}, {0.5, 0.5}, {0.9, 0.1}});
        auto s = signal_sequence(p, {0}, {{1}, {2}});
        CHECK(s == std::vector<double>{0.0, 0.0});
    }
    SUBCASE("chain rule, bound and permutation invariance on random joints") {
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 100; ++trial) {
            auto p = oracle::random_joint(rng, 4, 4, 4);
            std::vector<VarSelector> feats{{1}, {2}, {3}};
            auto s = signal_sequence(p, {0}, feats);
            const double total = std::accumulate(s.begin(), s.end(), 0.0);
            CHECK(std::abs(total - oracle::I(p, {0}, {1, 2, 3})) <= 1e-9);
            CHECK(total <= entropy(p, {0}) + 1e-9);
            std::vector<VarSelector> rev{{3}, {1}, {2}};
            auto s2 = signal_sequence(p, {0}, rev);
            CHECK(std::abs(total - std::accumulate(s2.begin(), s2.end(), 0.0)) <= 1e-9);
        }
    }
    SUBCASE("overlap rejected") {
        CHECK_THROWS_AS(signal_sequence(fair_coins(), {0}, {{1}, {1}}), PmfError);
        CHECK_THROWS_AS(signal_sequence(fair_coins(), {0}, {{0}}), PmfError);
    }
}

TEST_CASE("monotone conditioning") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = oracle::random_joint(rng, 3, 4, 4);
        VarSelector a{0}, g{1};
        VarSelector extra = VarSelector::range(2, p.arity());
        CHECK(conditional_entropy(p, a, g.join(extra)) <= conditional_entropy(p, a, g) + 1e-12);
    }
}

TEST_CASE("plug-in estimator") {
    SUBCASE("constant column collapses to a point mass") {
        std::vector<std::vector<double>> rows(10, {3.5});
        auto p = plugin_pmf_from_samples(rows, {BinningMode::EqualWidth, {2}});
        CHECK(p.table()[0] == 1.0);
        CHECK(entropy(p, {0}) == 0.0);
    }
    SUBCASE("integer-coded samples reproduce empirical frequencies") {
        std::vector<std::vector<double>> rows{{0, 1}, {1, 2}, {2, 0}, {0, 1}, {2, 2}};
        auto p = plugin_pmf_from_samples(rows, {BinningMode::EqualWidth, {3}});
        std::size_t t[2] = {0, 1};
        CHECK(p.at(t) == doctest::Approx(0.4));
        t[0] = 2;
        t[1] = 2;
        CHECK(p.at(t) == doctest::Approx(0.2));
        t[0] = 1;
        t[1] = 1;
        CHECK(p.at(t) == 0.0);
    }
    SUBCASE("equal-frequency bins split ranks evenly") {
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < 100; ++i) rows.push_back({static_cast<double>(i * i)});
        auto p = plugin_pmf_from_samples(rows, {BinningMode::EqualFrequency, {4}});
        for (double v : p.table()) CHECK(v == doctest::Approx(0.25));
    }
    SUBCASE("plug-in MI from 1000 samples is near the exact value") {
        JointPMF truth({{"a", 2}, {"b", 3}}, {0.25, 0.15, 0.1, 0.1, 0.15, 0.25});
        std::mt19937_64 rng(23);
        std::discrete_distribution<std::size_t> draw(truth.table().begin(), truth.table().end());
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < 1000; ++i) {
            auto t = truth.tuple_of(draw(rng));
            rows.push_back({static_cast<double>(t[0]), static_cast<double>(t[1])});
        }
        auto est = plugin_pmf_from_samples(rows, {BinningMode::EqualWidth, {2, 3}});
        CHECK(std::abs(mutual_information(est, {0}, {1}) - mutual_information(truth, {0}, {1})) < 0.05);
    }
    SUBCASE("deterministic") {
        std::vector<std::vector<double>> rows{{0.1, 5}, {0.7, 2}, {0.3, 9}};
        BinningSpec spec{BinningMode::EqualWidth, {2, 3}};
        CHECK(plugin_pmf_from_samples(rows, spec) == plugin_pmf_from_samples(rows, spec));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(plugin_pmf_from_samples({}, {}), PmfError);
        CHECK_THROWS_AS(plugin_pmf_from_samples({{1.0}, {NAN}}, {}), PmfError);
        CHECK_THROWS_AS(plugin_pmf_from_samples({{1.0}, {1.0, 2.0}}, {}), PmfError);
    }
}

TEST_CASE("pmf text format") {
    std::mt19937_64 rng(29);
    auto p = oracle::random_joint(rng, 3, 3, 4);
    std::stringstream ss;
    write_pmf(ss, p);
    const auto text = ss.str();
    CHECK(text.rfind("vars: v0:", 0) == 0);
    CHECK(text.find('\t') != std::string::npos);
    auto q = read_pmf(ss);
    CHECK(q == p);

    std::istringstream bad_header("variables: a:2\n0\t1\n");
    CHECK_THROWS_AS(read_pmf(bad_header), PmfError);
    std::istringstream bad_sum("vars: a:2\n0\t0.3\n1\t0.3\n");
    CHECK_THROWS_AS(read_pmf(bad_sum), PmfError);
    std::istringstream bad_index("vars: a:2\n2\t1\n");
    CHECK_THROWS_AS(read_pmf(bad_index), PmfError);
}
