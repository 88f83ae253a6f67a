#pragma once

#include "aicmab/gaussian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace aicmab {

/// Binary outcome of one pull.
enum class Outcome : std::uint8_t { Zero = 0, One = 1 };

inline constexpr std::array<Outcome, 2> kOutcomes{Outcome::Zero, Outcome::One};

inline constexpr int to_int(Outcome o) { return static_cast<int>(o); }

/// Binary context features. Stored as a real vector so it composes with the
/// rest of the linear algebra.
class ContextVector {
public:
    explicit ContextVector(const std::vector<int>& bits) : values_(static_cast<Eigen::Index>(bits.size())) {
        detail::require(!bits.empty(), "context must have at least one entry");
        for (std::size_t i = 0; i < bits.size(); ++i) {
            detail::require(bits[i] == 0 || bits[i] == 1, "context entries must be 0 or 1");
            values_[static_cast<Eigen::Index>(i)] = bits[i];
        }
    }
    ContextVector(std::initializer_list<int> bits) : ContextVector(std::vector<int>(bits)) {}

    static ContextVector zeros(Eigen::Index n) { return ContextVector(std::vector<int>(static_cast<std::size_t>(n), 0)); }
    static ContextVector ones(Eigen::Index n) { return ContextVector(std::vector<int>(static_cast<std::size_t>(n), 1)); }

    [[nodiscard]] Eigen::Index size() const { return values_.size(); }
    [[nodiscard]] const VectorXd& values() const { return values_; }
    [[nodiscard]] int operator[](Eigen::Index i) const { return static_cast<int>(values_[i]); }
    [[nodiscard]] bool is_zero() const { return values_.isZero(0.0); }

    friend bool operator==(const ContextVector& a, const ContextVector& b) { return a.values_ == b.values_; }

private:
    VectorXd values_;
};

/// Logistic sigmoid, evaluated on the branch that never overflows.
template <typename Scalar>
Scalar sigmoid(Scalar t) {
    if (t >= Scalar(0)) {
        return Scalar(1) / (Scalar(1) + std::exp(-t));
    }
    const Scalar e = std::exp(t);
    return e / (Scalar(1) + e);
}

/// log σ(t) without cancellation for large |t|.
template <typename Scalar>
Scalar log_sigmoid(Scalar t) {
    if (t >= Scalar(0)) return -std::log1p(std::exp(-t));
    return t - std::log1p(std::exp(t));
}

/// log(1 + eᵗ), overflow-safe.
template <typename Scalar>
Scalar softplus(Scalar t) {
    return t > Scalar(0) ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

/// Probability of `outcome` given activation t = θᵀx.
template <typename Scalar>
Scalar outcome_prob(Scalar activation, Outcome outcome) {
    return outcome == Outcome::One ? sigmoid(activation) : sigmoid(-activation);
}

template <typename Scalar>
Scalar log_outcome_prob(Scalar activation, Outcome outcome) {
    return outcome == Outcome::One ? log_sigmoid(activation) : log_sigmoid(-activation);
}

template <typename Scalar>
Scalar sigmoid_prob(const Vector<Scalar>& theta, const ContextVector& x, Outcome outcome) {
    detail::require(theta.size() == x.size(), "theta and context lengths differ");
    return outcome_prob(theta.dot(x.values().template cast<Scalar>()), outcome);
}

/// λ(ξ) = (σ(ξ) − ½)/(2ξ), with the removable singularity at 0 filled by 1/8.
template <typename Scalar>
Scalar lambda_of_xi(Scalar xi) {
    if (std::abs(xi) < Scalar(1e-6)) return Scalar(0.125);
    // σ(ξ) − ½ = ½ tanh(ξ/2)
    return std::tanh(xi / Scalar(2)) / (Scalar(4) * xi);
}

/// Free parameters of the two-class log-sum-exp bound: α and (ξ₀, ξ₁).
struct VariationalParams {
    double alpha = 0.0;
    std::array<double, 2> xi{0.0, 0.0};
    int iterations = 0;
    bool converged = true;
};

/// Lower-bounding quadratic factor of p(o | θ) for context x.
///
///   G = Σ_h [ξ_h/2 + λ(ξ_h)(ξ_h² − α²) − log(1 + e^{ξ_h})]
///   H = (±½ + 2λ(ξ₁)α) x       (− for outcome 0, + for outcome 1)
///   K = 2λ(ξ₁) xxᵀ
template <typename Scalar = double>
QuadraticFactor<Scalar> bound_coefficients(const ContextVector& x, Outcome outcome, const VariationalParams& vp) {
    detail::require(vp.xi[0] >= 0.0 && vp.xi[1] >= 0.0, "xi must be non-negative");
    detail::require(std::isfinite(vp.alpha) && std::isfinite(vp.xi[0]) && std::isfinite(vp.xi[1]),
                    "variational parameters must be finite");
    const Scalar alpha = vp.alpha;
    Scalar g = 0;
    for (const double xi_d : vp.xi) {
        const Scalar xi = xi_d;
        g += xi / Scalar(2) + lambda_of_xi(xi) * (xi * xi - alpha * alpha) - softplus(xi);
    }
    const Scalar lam1 = lambda_of_xi(Scalar(vp.xi[1]));
    const Vector<Scalar> xv = x.values().template cast<Scalar>();
    const Scalar sign = outcome == Outcome::One ? Scalar(0.5) : Scalar(-0.5);
    return QuadraticFactor<Scalar>(g, (sign + Scalar(2) * lam1 * alpha) * xv,
                                   Scalar(2) * lam1 * (xv * xv.transpose()));
}

namespace detail {

// ξ_h² = E[(y_h − α)²] with y₀ = 0 and y₁ = θᵀx ~ N(m, v).
inline std::array<double, 2> moment_xi(double alpha, double m, double v) {
    return {std::abs(alpha), std::sqrt(v + (m - alpha) * (m - alpha))};
}

}  // namespace detail

/// Fixed-point tightening of (α, ξ) for a Gaussian belief over θ.
///
/// Alternates the moment update of ξ with the stationary α for the expected
/// bound. Both steps minimize the expected LSE bound, so the expected
/// log-factor never decreases. Stops when the largest parameter change drops
/// below 1e-6 or after 100 sweeps, flagging non-convergence.
template <typename Scalar>
VariationalParams optimize_variational_params(const GaussianBelief<Scalar>& belief, const ContextVector& x) {
    detail::require(belief.dim() == x.size(), "belief and context dimensions differ");
    constexpr double tol = 1e-6;
    constexpr int max_iter = 100;

    const Vector<Scalar> xv = x.values().template cast<Scalar>();
    const double m = static_cast<double>(belief.mean().dot(xv));
    const double v = static_cast<double>(xv.dot(belief.covariance() * xv));

    VariationalParams vp;
    vp.alpha = m / 2.0;
    vp.xi = detail::moment_xi(vp.alpha, m, v);
    vp.converged = false;
    for (int it = 1; it <= max_iter; ++it) {
        const double lam0 = lambda_of_xi(vp.xi[0]);
        const double lam1 = lambda_of_xi(vp.xi[1]);
        const double alpha = (lam1 * m) / (lam0 + lam1);
        const auto xi = detail::moment_xi(alpha, m, v);
        const double change = std::max({std::abs(alpha - vp.alpha), std::abs(xi[0] - vp.xi[0]),
                                        std::abs(xi[1] - vp.xi[1])});
        vp.alpha = alpha;
        vp.xi = xi;
        vp.iterations = it;
        if (change < tol) {
            vp.converged = true;
            break;
        }
    }
    return vp;
}

}  // namespace aicmab
