#pragma once

#include "aicmab/gaussian.hpp"
#include "aicmab/likelihood.hpp"
#include "aicmab/rng.hpp"

#include <cmath>
#include <functional>

namespace aicmab::testing {

/// Well-conditioned SPD matrix: B Bᵀ/n + floor·I with B ~ U[-1,1).
inline MatrixXd random_spd(Eigen::Index n, Rng& rng, double floor = 0.2) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MatrixXd b(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) b(i, j) = u(rng);
    return b * b.transpose() / static_cast<double>(n) + floor * MatrixXd::Identity(n, n);
}

inline VectorXd random_vector(Eigen::Index n, Rng& rng, double half_width = 1.0) {
    std::uniform_real_distribution<double> u(-half_width, half_width);
    VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
    return v;
}

inline GaussianBeliefd random_belief(Eigen::Index n, Rng& rng) {
    return GaussianBeliefd(random_vector(n, rng), random_spd(n, rng));
}

inline ContextVector random_context(Eigen::Index n, Rng& rng, bool allow_zero = false) {
    std::bernoulli_distribution coin(0.5);
    std::vector<int> bits(static_cast<std::size_t>(n));
    bool any = false;
    do {
        any = false;
        for (auto& b : bits) {
            b = coin(rng) ? 1 : 0;
            any = any || b == 1;
        }
    } while (!allow_zero && !any);
    return ContextVector(bits);
}

/// Plain density, written out independently of GaussianBelief.
inline double normal_density(const VectorXd& theta, const VectorXd& mean, const MatrixXd& cov) {
    const auto n = static_cast<double>(mean.size());
    const VectorXd d = theta - mean;
    return std::exp(-0.5 * d.dot(cov.inverse() * d)) / std::sqrt(std::pow(2.0 * M_PI, n) * cov.determinant());
}

/// Trapezoidal rule on [lo, hi]² with `nodes` points per axis.
inline double grid_2d(const std::function<double(const VectorXd&)>& f, double lo, double hi, int nodes) {
    const double h = (hi - lo) / (nodes - 1);
    double sum = 0.0;
    VectorXd p(2);
    for (int i = 0; i < nodes; ++i) {
        const double wi = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
        p[0] = lo + h * i;
        for (int j = 0; j < nodes; ++j) {
            const double wj = (j == 0 || j == nodes - 1) ? 0.5 : 1.0;
            p[1] = lo + h * j;
            sum += wi * wj * f(p);
        }
    }
    return sum * h * h;
}

/// Composite Simpson rule on [lo, hi] (even panel count).
inline double simpson_1d(const std::function<double(double)>& f, double lo, double hi, int panels = 20000) {
    const double h = (hi - lo) / panels;
    double sum = f(lo) + f(hi);
    for (int i = 1; i < panels; ++i) sum += f(lo + h * i) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

inline double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

}  // namespace aicmab::testing
