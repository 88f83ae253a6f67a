#include "aicmab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace aicmab {

EfeBreakdown quadrature_oracle(const GaussianBeliefd& belief, const ContextVector& x, const PriorPreference& pref,
                               int nodes_per_axis) {
    const auto n = static_cast<int>(belief.dim());
    if (n > 3) throw std::invalid_argument("quadrature oracle supports dimension <= 3");
    detail::require(x.size() == n, "belief and context dimensions differ");
    detail::require(nodes_per_axis >= 3, "need at least three nodes per axis");

    // Grid along the principal axes: θ = μ + V·diag(√λ)·u, so the density is
    // the standard normal in u whatever the correlation structure.
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(belief.covariance());
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
        throw NumericalError("quadrature oracle needs a positive definite covariance");
    }
    const MatrixXd axes = eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal();
    const VectorXd& mu = belief.mean();
    const double log_norm = -0.5 * n * std::log(2.0 * std::numbers::pi);

    std::vector<double> nodes;
    std::vector<double> weights;
    const double h = 2.0 * kQuadratureHalfWidth / (nodes_per_axis - 1);
    for (int j = 0; j < nodes_per_axis; ++j) {
        nodes.push_back(-kQuadratureHalfWidth + h * j);
        weights.push_back((j == 0 || j == nodes_per_axis - 1) ? 0.5 * h : h);
    }

    // C(o) and S(o) = ∫ q p(o|θ) log p(o|θ).
    double c[2] = {0.0, 0.0};
    double s[2] = {0.0, 0.0};
    const VectorXd x_axes = axes.transpose() * x.values();
    const double t0 = mu.dot(x.values());
    long total = 1;
    for (int i = 0; i < n; ++i) total *= nodes_per_axis;
    for (long flat = 0; flat < total; ++flat) {
        long rem = flat;
        double w = 1.0;
        double u2 = 0.0;
        double t = t0;
        for (int i = 0; i < n; ++i) {
            const auto j = static_cast<std::size_t>(rem % nodes_per_axis);
            rem /= nodes_per_axis;
            w *= weights[j];
            u2 += nodes[j] * nodes[j];
            t += x_axes[i] * nodes[j];
        }
        const double mass = w * std::exp(log_norm - 0.5 * u2);
        // Two-sided stable log-sigmoid, written out here rather than shared.
        const double log_p1 = t >= 0 ? -std::log1p(std::exp(-t)) : t - std::log1p(std::exp(t));
        const double log_p0 = log_p1 - t;
        const double p1 = std::exp(log_p1);
        const double p0 = std::exp(log_p0);
        c[0] += mass * p0;
        c[1] += mass * p1;
        s[0] += mass * p0 * log_p0;
        s[1] += mass * p1 * log_p1;
    }

    EfeBreakdown out;
    for (const Outcome o : kOutcomes) {
        const auto i = static_cast<std::size_t>(to_int(o));
        out.c_hat[i] = c[i];
        out.per_outcome[i] = c[i] * std::log(c[i] / pref[o]) - s[i];
        out.total += out.per_outcome[i];
        out.pragmatic -= c[i] * std::log(pref[o]);
        out.epistemic += s[i] - c[i] * std::log(c[i]);
    }
    return out;
}

}  // namespace aicmab
