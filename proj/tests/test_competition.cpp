#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "featcomp/competition.hpp"
#include "featcomp/information.hpp"
#include "info_oracle.hpp"

using namespace featcomp;
namespace tv = featcomp::task_var;

namespace {

double p_right_matches_left(const JointPMF& joint, std::size_t y) {
    auto m = marginalize(joint, {tv::kLeftLabel, tv::kRightLabel});
    const std::size_t k = joint.variables()[tv::kLeftLabel].size;
    double row = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
        std::size_t t[2] = {y, r};
        row += m.at(t);
    }
    std::size_t t[2] = {y, y};
    return m.at(t) / row;
}

}  // namespace

TEST_CASE("build_task_joint couplings") {
    SUBCASE("rho_r = 1 couples labels perfectly") {
        auto j = build_task_joint({0.4, 1.0, 10});
        for (std::size_t y = 0; y < 10; ++y) CHECK(p_right_matches_left(j, y) == doctest::Approx(1.0));
    }
    SUBCASE("rho_r = 0 leaves labels independent and uniform") {
        auto j = build_task_joint({0.4, 0.0, 10});
        CHECK(mutual_information(j, {tv::kLeftLabel}, {tv::kRightLabel}) == 0.0);
        auto yr = marginalize(j, {tv::kRightLabel});
        for (double v : yr.table()) CHECK(v == doctest::Approx(0.1));
    }
    SUBCASE("rho_r = 0.5 gives 0.55 agreement") {
        auto j = build_task_joint({0.3, 0.5, 10});
        for (std::size_t y = 0; y < 10; ++y) CHECK(p_right_matches_left(j, y) == doctest::Approx(0.55));
    }
    SUBCASE("left view encodes corruption and label") {
        auto j = build_task_joint({0.7, 0.2, 4});
        auto c = marginalize(j, {tv::kCorruption});
        CHECK(c.table()[1] == doctest::Approx(0.7));
        // X_l is a function of (C, Y_l)
        CHECK(conditional_entropy(j, {tv::kLeftView}, {tv::kCorruption, tv::kLeftLabel}) == 0.0);
        // and X_l reveals C
        CHECK(conditional_entropy(j, {tv::kCorruption}, {tv::kLeftView}) == 0.0);
    }
    SUBCASE("invalid params") {
        CHECK_THROWS_AS(build_task_joint({1.2, 0.0, 10}), std::invalid_argument);
        CHECK_THROWS_AS(build_task_joint({0.5, -0.1, 10}), std::invalid_argument);
        CHECK_THROWS_AS(build_task_joint({0.5, 0.5, 1}), std::invalid_argument);
        CHECK_THROWS_AS(task_signal({NAN, 0.5, 10}), std::invalid_argument);
    }
}

TEST_CASE("task_signal examples") {
    CHECK(task_signal({1.0, 0.7, 10}) == 0.0);
    CHECK(task_signal({0.3, 0.0, 10}) == 0.0);
    CHECK(task_signal({0.0, 1.0, 10}) == doctest::Approx(std::log2(10.0)).epsilon(1e-14));

    // (0.5, 0.5): brute force over the enumerated joint with the test oracle.
    auto joint = build_task_joint({0.5, 0.5, 10});
    const double oracle_value = oracle::I_cond(joint, {tv::kLeftLabel}, {tv::kRightLabel}, {tv::kLeftView});
    // 0.5 * (log2 10 - H(0.55, 0.05 x 9))
    const double row_h = -(0.55 * std::log2(0.55) + 9 * 0.05 * std::log2(0.05));
    const double hand = 0.5 * (std::log2(10.0) - row_h);
    CHECK(std::abs(oracle_value - hand) <= 1e-12);
    CHECK(std::abs(task_signal({0.5, 0.5, 10}) - hand) <= 1e-12);
    CHECK(hand == doctest::Approx(0.4513436951252565).epsilon(1e-12));
}

TEST_CASE("closed form matches enumeration") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        CorruptionParams p{u(rng), u(rng), 2 + static_cast<std::size_t>(u(rng) * 9)};
        CHECK(std::abs(task_signal(p) - task_signal_closed_form(p)) <= 1e-9);
    }
}

TEST_CASE("signal surface") {
    SUBCASE("2x2 corners") {
        auto s = signal_surface({0.0, 1.0}, {0.0, 1.0});
        CHECK(s.values[0][0] == 0.0);
        CHECK(s.values[0][1] == doctest::Approx(std::log2(10.0)));
        CHECK(s.values[1][0] == 0.0);
        CHECK(s.values[1][1] == 0.0);
    }
    SUBCASE("11x11 monotonicity and bounds") {
        auto g = unit_grid(11);
        auto s = signal_surface(g, g, 10);
        for (std::size_t i = 0; i < 11; ++i) {
            CHECK(s.values[i][0] == 0.0);
            CHECK(s.values[10][i] == 0.0);
            for (std::size_t j = 0; j < 11; ++j) {
                CHECK(s.values[i][j] >= 0.0);
                CHECK(s.values[i][j] <= std::log2(10.0) + 1e-12);
                if (i > 0 && j > 0) CHECK(s.values[i][j] < s.values[i - 1][j]);
                if (j > 0 && i < 10) CHECK(s.values[i][j] > s.values[i][j - 1]);
            }
        }
    }
    SUBCASE("malformed grids") {
        CHECK_THROWS_AS(signal_surface({}, {0.5}), std::invalid_argument);
        CHECK_THROWS_AS(signal_surface({0.5, 0.2}, {0.5}), std::invalid_argument);
        CHECK_THROWS_AS(signal_surface({0.5}, {1.5}), std::invalid_argument);
    }
    SUBCASE("csv layout") {
        auto s = signal_surface({0.0, 1.0}, {0.0, 0.5});
        std::ostringstream out;
        write_surface_csv(out, s);
        CHECK(out.str() == "rho_l\\rho_r,0,0.5\n0,0.000000,0.902687\n1,0.000000,0.000000\n");
    }
}

TEST_CASE("min_signal_bound") {
    CHECK(min_signal_bound(1.0, 10) == doctest::Approx(0.1));
    CHECK(min_signal_bound(0.0, 3) == 0.0);
    CHECK_THROWS_AS(min_signal_bound(1.0, 0), std::invalid_argument);

    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = oracle::random_joint(rng, 2, 4, 4);
        std::vector<VarSelector> feats;
        for (std::size_t i = 1; i < p.arity(); ++i) feats.push_back({i});
        auto s = signal_sequence(p, {0}, feats);
        const double lo = *std::min_element(s.begin(), s.end());
        CHECK(lo <= min_signal_bound(entropy(p, {0}), feats.size()) + 1e-9);
    }
}
