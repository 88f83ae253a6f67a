#include "aicmab/bandit_env.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

using namespace aicmab;
using namespace aicmab::testing;

TEST(Environment, InvariantsHold) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const std::size_t k = 1 + seed % 7;
        const Eigen::Index c = 1 + static_cast<Eigen::Index>(seed % 5);
        const auto env = generate_environment(k, c, rng);
        ASSERT_EQ(env.num_arms(), k);
        ASSERT_EQ(env.context_dim(), c);
        for (std::size_t a = 0; a < k; ++a) {
            EXPECT_EQ(env.true_probs[a], sigmoid(env.true_thetas[a].dot(env.context.values())));
        }
        EXPECT_EQ(env.best_prob, *std::max_element(env.true_probs.begin(), env.true_probs.end()));
    }
}

TEST(Environment, RegenerationIsBitIdentical) {
    Rng a(42), b(42);
    const auto ea = generate_environment(10, 5, a);
    const auto eb = generate_environment(10, 5, b);
    EXPECT_EQ(ea.context, eb.context);
    EXPECT_EQ(ea.true_probs, eb.true_probs);
    for (std::size_t k = 0; k < 10; ++k) EXPECT_EQ(ea.true_thetas[k], eb.true_thetas[k]);
}

TEST(Environment, SingleArm) {
    Rng rng(1);
    const auto env = generate_environment(1, 3, rng);
    EXPECT_EQ(env.best_prob, env.true_probs[0]);
}

TEST(Environment, ContextEntriesAreFairCoins) {
    Rng rng(2);
    int ones = 0, total = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto env = generate_environment(10, 10, rng);
        for (Eigen::Index j = 0; j < 10; ++j) ones += env.context[j];
        total += 10;
    }
    EXPECT_NEAR(static_cast<double>(ones) / total, 0.5, 0.02);
}

TEST(Environment, Validation) {
    Rng rng(3);
    EXPECT_THROW(generate_environment(0, 3, rng), std::invalid_argument);
    EXPECT_THROW(generate_environment(3, 0, rng), std::invalid_argument);
    EXPECT_THROW(Environment({VectorXd::Zero(2)}, ContextVector{1, 1, 1}), std::invalid_argument);
}

TEST(Pull, SaturatedArmAlwaysSucceeds) {
    const Environment env({VectorXd::Constant(2, 400.0)}, ContextVector{1, 1});
    Rng rng(4);
    for (int i = 0; i < 10000; ++i) EXPECT_EQ(pull(env, 0, rng), Outcome::One);
}

TEST(Pull, FairCoin) {
    const Environment env({VectorXd::Zero(2)}, ContextVector{1, 0});
    EXPECT_EQ(env.true_probs[0], 0.5);
    Rng rng(5);
    int ones = 0;
    for (int i = 0; i < 10000; ++i) ones += to_int(pull(env, 0, rng));
    EXPECT_NEAR(ones / 10000.0, 0.5, 0.02);
}

TEST(Pull, ReproducibleAndRangeChecked) {
    Rng setup(6);
    const auto env = generate_environment(3, 3, setup);
    Rng a(7), b(7);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(pull(env, i % 3, a), pull(env, i % 3, b));
    EXPECT_THROW(pull(env, 3, a), std::out_of_range);
}

TEST(CumulativeRegret, AllPullsOnBestArm) {
    const Environment env({VectorXd::Constant(1, 2.0), VectorXd::Constant(1, -1.0)}, ContextVector{1});
    EXPECT_EQ(cumulative_regret(env, {10, 0}, 10), 0.0);
}

TEST(CumulativeRegret, WorkedExample) {
    // ψ* = 0.9 and ψ = 0.5 via activations logit(0.9) and 0.
    const Environment env({VectorXd::Constant(1, std::log(9.0)), VectorXd::Zero(1)}, ContextVector{1});
    EXPECT_NEAR(env.best_prob, 0.9, 1e-15);
    EXPECT_NEAR(cumulative_regret(env, {0, 10}, 10), 4.0, 1e-12);
    EXPECT_THROW(cumulative_regret(env, {0, 9}, 10), std::invalid_argument);
}

TEST(CumulativeRegret, MatchesStepwiseAccumulation) {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const auto env = generate_environment(6, 4, rng);
        std::uniform_int_distribution<std::size_t> pick(0, 5);
        std::vector<std::uint64_t> counts(6, 0);
        double stepwise = 0.0;
        double previous = 0.0;
        for (std::uint64_t t = 1; t <= 200; ++t) {
            const std::size_t a = pick(rng);
            ++counts[a];
            stepwise += env.best_prob - env.true_probs[a];
            const double now = cumulative_regret(env, counts, t);
            EXPECT_GE(now, previous);
            previous = now;
        }
        EXPECT_NEAR(cumulative_regret(env, counts, 200), stepwise, 1e-10);
    }
}

TEST(CumulativeRegret, ZeroOnlyWhenEveryPullIsOptimal) {
    const Environment env({VectorXd::Constant(1, 1.0), VectorXd::Constant(1, 1.0), VectorXd::Zero(1)},
                          ContextVector{1});
    EXPECT_EQ(cumulative_regret(env, {3, 4, 0}, 7), 0.0);
    EXPECT_GT(cumulative_regret(env, {3, 3, 1}, 7), 0.0);
}

TEST(Manifest, RoundTrip) {
    Rng rng(9);
    const auto env = generate_environment(4, 3, rng);
    std::stringstream ss;
    write_manifest(ss, env, 1234);
    std::uint64_t seed = 0;
    const auto back = read_manifest(ss, &seed);
    EXPECT_EQ(seed, 1234u);
    EXPECT_EQ(back.context, env.context);
    EXPECT_EQ(back.true_probs, env.true_probs);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(back.true_thetas[k], env.true_thetas[k]);
}
