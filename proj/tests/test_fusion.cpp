#include "aicmab/fusion.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace aicmab;
using namespace aicmab::testing;

namespace {

GaussianBeliefd scalar_belief(double mean, double var) {
    return GaussianBeliefd(VectorXd::Constant(1, mean), MatrixXd::Constant(1, 1, var));
}

double standard_normal(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); }

// True marginal of `o` under a 2-D belief by trapezoid over a wide box.
double grid_marginal(const GaussianBeliefd& b, const ContextVector& x, Outcome o) {
    const MatrixXd prec = b.covariance().inverse();
    const double norm = 1.0 / (2.0 * M_PI * std::sqrt(b.covariance().determinant()));
    return grid_2d(
        [&](const VectorXd& t) {
            const VectorXd d = t - b.mean();
            const double a = t.dot(x.values());
            return norm * std::exp(-0.5 * d.dot(prec * d)) * (o == Outcome::One ? logistic(a) : logistic(-a));
        },
        -12.0, 12.0, 801);
}

// Root of θ − (1 − σ(θ)) = 0 by bisection.
double bisect_map() {
    double lo = -5.0, hi = 5.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid - (1.0 - logistic(mid)) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(FusionMethod, ParseAndPrint) {
    for (const auto m : {FusionMethod::VB, FusionMethod::VBIS, FusionMethod::Laplace}) {
        EXPECT_EQ(parse_fusion_method(to_string(m)), m);
    }
    EXPECT_THROW(parse_fusion_method("ep"), std::invalid_argument);
}

TEST(VbFuse, ZeroContextKeepsPrior) {
    Rng rng(1);
    const auto prior = random_belief(3, rng);
    for (const Outcome o : kOutcomes) {
        const auto r = vb_fuse(prior, ContextVector::zeros(3), o);
        EXPECT_LE(r.c_hat, 0.5);
        EXPECT_TRUE(r.posterior.mean().isApprox(prior.mean(), 1e-14));
        EXPECT_TRUE(r.posterior.covariance().isApprox(prior.covariance(), 1e-14));
    }
}

TEST(VbFuse, SymmetricUnitCaseIsBelowHalf) {
    for (const Outcome o : kOutcomes) {
        const auto r = vb_fuse(scalar_belief(0.0, 1.0), ContextVector{1}, o);
        EXPECT_LE(r.c_hat, 0.5);
        EXPECT_GT(r.c_hat, 0.0);
    }
}

TEST(VbFuse, LowerBoundsGridMarginalIn2D) {
    Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto prior = random_belief(2, rng);
        const auto x = random_context(2, rng);
        for (const Outcome o : kOutcomes) {
            EXPECT_LE(vb_fuse(prior, x, o).c_hat, grid_marginal(prior, x, o) + 1e-6);
        }
    }
}

TEST(VbisFuse, ZeroContextIsExactHalf) {
    Rng rng(3);
    const auto prior = random_belief(2, rng);
    for (const std::size_t n : {std::size_t{2}, std::size_t{10}, std::size_t{10000}}) {
        const auto r = vbis_fuse(prior, ContextVector::zeros(2), Outcome::One, n, rng);
        EXPECT_EQ(r.c_hat, 0.5);
        EXPECT_TRUE(r.posterior.mean().isApprox(prior.mean(), 1e-12));
        EXPECT_TRUE(r.posterior.covariance().isApprox(prior.covariance(), 1e-12));
    }
}

TEST(VbisFuse, UnitCaseMatchesQuadrature) {
    // Posterior mean oracle: ∫θσ(θ)φ(θ)dθ / ∫σ(θ)φ(θ)dθ.
    const double c = simpson_1d([](double t) { return logistic(t) * standard_normal(t); }, -12.0, 12.0);
    const double m = simpson_1d([](double t) { return t * logistic(t) * standard_normal(t); }, -12.0, 12.0) / c;
    EXPECT_NEAR(c, 0.5, 1e-12);
    EXPECT_NEAR(m, 0.42, 0.02);

    Rng rng(4);
    const auto r = vbis_fuse(scalar_belief(0.0, 1.0), ContextVector{1}, Outcome::One, 100000, rng);
    EXPECT_NEAR(r.c_hat, 0.5, 0.01);
    EXPECT_NEAR(r.posterior.mean()[0], m, 0.02);
    EXPECT_NEAR(r.posterior.mean()[0], 0.42, 0.02);
}

TEST(VbisFuse, DeterministicGivenSeed) {
    Rng setup(5);
    const auto prior = random_belief(3, setup);
    const ContextVector x{1, 0, 1};
    Rng a(77), b(77);
    const auto ra = vbis_fuse(prior, x, Outcome::Zero, 500, a);
    const auto rb = vbis_fuse(prior, x, Outcome::Zero, 500, b);
    EXPECT_EQ(ra.c_hat, rb.c_hat);
    EXPECT_EQ(ra.posterior.mean(), rb.posterior.mean());
    EXPECT_EQ(ra.posterior.covariance(), rb.posterior.covariance());
}

TEST(VbisFuse, RejectsFewerThanTwoSamples) {
    Rng rng(6);
    for (const std::size_t n : {std::size_t{0}, std::size_t{1}}) {
        EXPECT_THROW(vbis_fuse(GaussianBeliefd::standard(1), ContextVector{1}, Outcome::One, n, rng),
                     std::invalid_argument);
    }
}

// Median error over 50 seeds shrinks with the sample count.
TEST(VbisFuse, ConsistentAsSamplesGrow) {
    Rng setup(7);
    const auto prior = random_belief(2, setup);
    const ContextVector x{1, 1};
    const double truth = grid_marginal(prior, x, Outcome::One);
    double previous = 1e300;
    for (const std::size_t n : {std::size_t{1000}, std::size_t{10000}, std::size_t{100000}}) {
        std::vector<double> errs;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Rng rng = make_stream(seed, n);
            errs.push_back(std::abs(vbis_fuse(prior, x, Outcome::One, n, rng).c_hat - truth));
        }
        std::nth_element(errs.begin(), errs.begin() + 25, errs.end());
        EXPECT_LT(errs[25], previous) << "n=" << n;
        previous = errs[25];
    }
}

TEST(NewtonMap, ZeroContextOneStep) {
    Rng rng(8);
    const auto prior = random_belief(3, rng);
    const auto r = newton_map(prior, ContextVector::zeros(3), Outcome::One);
    EXPECT_LE(r.iterations, 1);
    EXPECT_TRUE(r.map.isApprox(prior.mean(), 1e-14));
}

TEST(NewtonMap, UnitCaseMatchesBisection) {
    const double root = bisect_map();
    const auto r = newton_map(scalar_belief(0.0, 1.0), ContextVector{1}, Outcome::One);
    EXPECT_NEAR(r.map[0], root, 1e-9);
    EXPECT_NEAR(r.map[0], 0.4011, 1e-4);
}

TEST(NewtonMap, GradientVanishesOnRandomInstances) {
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 1 + trial % 5;
        const auto prior = random_belief(n, rng);
        const auto x = random_context(n, rng);
        const Outcome o = trial % 2 ? Outcome::One : Outcome::Zero;
        const auto r = newton_map(prior, x, o);
        // Gradient recomputed here: −Σ⁻¹(θ−μ) + (o − σ(θᵀx)) x.
        const double y = o == Outcome::One ? 1.0 : 0.0;
        const VectorXd grad = -prior.covariance().inverse() * (r.map - prior.mean()) +
                              (y - logistic(r.map.dot(x.values()))) * x.values();
        EXPECT_LT(grad.cwiseAbs().maxCoeff(), 1e-9) << "trial " << trial;
    }
}

TEST(LaplaceFuse, ZeroContextIsExact) {
    Rng rng(10);
    const auto prior = random_belief(2, rng);
    const auto r = laplace_fuse(prior, ContextVector::zeros(2), Outcome::Zero);
    EXPECT_EQ(r.c_hat, 0.5);
    EXPECT_TRUE(r.posterior.mean().isApprox(prior.mean(), 1e-14));
    EXPECT_TRUE(r.posterior.covariance().isApprox(prior.covariance(), 1e-14));
}

TEST(LaplaceFuse, UnitCaseWithinFivePercent) {
    for (const Outcome o : kOutcomes) {
        EXPECT_NEAR(laplace_fuse(scalar_belief(0.0, 1.0), ContextVector{1}, o).c_hat, 0.5, 0.025);
    }
}

TEST(LaplaceFuse, MatchesGridMarginalIn2D) {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto prior = random_belief(2, rng);
        const auto x = random_context(2, rng);
        for (const Outcome o : kOutcomes) {
            const double truth = grid_marginal(prior, x, o);
            EXPECT_NEAR(laplace_fuse(prior, x, o).c_hat / truth, 1.0, 0.1);
        }
    }
}

TEST(LaplaceFuse, PosteriorVarianceAlongContextShrinks) {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 1 + trial % 5;
        const auto prior = random_belief(n, rng);
        const auto x = random_context(n, rng);
        const auto r = laplace_fuse(prior, x, Outcome::One);
        const VectorXd& xv = x.values();
        EXPECT_LE(xv.dot(r.posterior.covariance() * xv), xv.dot(prior.covariance() * xv) + 1e-12);
    }
}

// c_hat(0) + c_hat(1) near 1 for both approximate methods.
TEST(FusionProperties, Complementarity) {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 1 + trial % 5;
        const auto prior = random_belief(n, rng);
        const auto x = random_context(n, rng);
        for (const auto m : {FusionMethod::Laplace, FusionMethod::VBIS}) {
            const double sum = fuse(m, prior, x, Outcome::Zero, 1000, rng).c_hat +
                               fuse(m, prior, x, Outcome::One, 1000, rng).c_hat;
            EXPECT_GE(sum, 0.9);
            EXPECT_LE(sum, 1.1);
        }
    }
}

TEST(FusionProperties, VbNeverExceedsTrueMarginal) {
    Rng rng(14);
    for (int trial = 0; trial < 200; ++trial) {
        const double mean = 4.0 * (rng() / 1.8446744073709552e19) - 2.0;
        const double var = 0.05 + 3.0 * (rng() / 1.8446744073709552e19);
        const auto prior = scalar_belief(mean, var);
        for (const Outcome o : kOutcomes) {
            const double truth = simpson_1d(
                [&](double t) {
                    const double p = o == Outcome::One ? logistic(t) : logistic(-t);
                    return p * standard_normal((t - mean) / std::sqrt(var)) / std::sqrt(var);
                },
                mean - 12.0 * std::sqrt(var), mean + 12.0 * std::sqrt(var));
            EXPECT_LE(vb_fuse(prior, ContextVector{1}, o).c_hat, truth + 1e-9);
        }
    }
}

TEST(FusionProperties, OutputsArePositiveDefinite) {
    Rng rng(15);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 1 + trial % 5;
        const auto prior = random_belief(n, rng);
        const auto x = random_context(n, rng);
        for (const auto m : {FusionMethod::VB, FusionMethod::VBIS, FusionMethod::Laplace}) {
            const auto r = fuse(m, prior, x, Outcome::One, 500, rng);
            EXPECT_GT(r.c_hat, 0.0);
            EXPECT_LT(r.c_hat, 1.0);
            EXPECT_EQ(r.method, m);
            EXPECT_EQ(Eigen::LLT<MatrixXd>(r.posterior.covariance()).info(), Eigen::Success);
        }
    }
}
