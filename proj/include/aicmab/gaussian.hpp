#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace aicmab {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Thrown when a linear-algebra routine meets a matrix that violates its
/// definiteness precondition (e.g. an invalid bound or a corrupt posterior).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

template <typename Scalar>
Matrix<Scalar> symmetrized(const Matrix<Scalar>& m) {
    return (m + m.transpose()) * Scalar(0.5);
}

template <typename Scalar>
Scalar log_det(const Eigen::LLT<Matrix<Scalar>>& llt) {
    return Scalar(2) * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace detail

/// Multivariate normal belief N(mean, covariance).
///
/// The covariance is symmetrized on construction and must admit a Cholesky
/// factorization. The factor, the precision matrix and the log-determinant are
/// cached; the object is immutable afterwards.
template <typename Scalar>
class GaussianBelief {
public:
    using VectorType = Vector<Scalar>;
    using MatrixType = Matrix<Scalar>;

    GaussianBelief(VectorType mean, const MatrixType& covariance)
        : mean_(std::move(mean)), covariance_(detail::symmetrized<Scalar>(covariance)) {
        detail::require(covariance_.rows() == covariance_.cols(), "covariance must be square");
        detail::require(mean_.size() == covariance_.rows(), "mean length must equal covariance dimension");
        detail::require(mean_.size() >= 1, "belief dimension must be at least 1");
        detail::require(mean_.allFinite() && covariance_.allFinite(), "belief entries must be finite");
        llt_.compute(covariance_);
        if (llt_.info() != Eigen::Success) {
            throw NumericalError("covariance is not positive definite");
        }
        precision_ = llt_.solve(MatrixType::Identity(dim(), dim()));
        precision_ = detail::symmetrized<Scalar>(precision_);
        log_det_ = detail::log_det<Scalar>(llt_);
    }

    static GaussianBelief standard(Eigen::Index n) {
        return GaussianBelief(VectorType::Zero(n), MatrixType::Identity(n, n));
    }

    [[nodiscard]] Eigen::Index dim() const { return mean_.size(); }
    [[nodiscard]] const VectorType& mean() const { return mean_; }
    [[nodiscard]] const MatrixType& covariance() const { return covariance_; }
    [[nodiscard]] const MatrixType& precision() const { return precision_; }
    [[nodiscard]] const Eigen::LLT<MatrixType>& llt() const { return llt_; }
    [[nodiscard]] Scalar log_det_covariance() const { return log_det_; }

    /// Squared Mahalanobis distance of `theta` from the mean.
    [[nodiscard]] Scalar mahalanobis2(const VectorType& theta) const {
        const VectorType z = llt_.matrixL().solve(theta - mean_);
        return z.squaredNorm();
    }

    [[nodiscard]] Scalar log_pdf(const VectorType& theta) const {
        const Scalar n = static_cast<Scalar>(dim());
        return Scalar(-0.5) * (n * std::log(Scalar(2) * std::numbers::pi_v<Scalar>) + log_det_ +
                               mahalanobis2(theta));
    }

    [[nodiscard]] Scalar pdf(const VectorType& theta) const { return std::exp(log_pdf(theta)); }

private:
    VectorType mean_;
    MatrixType covariance_;
    Eigen::LLT<MatrixType> llt_;
    MatrixType precision_;
    Scalar log_det_{0};
};

/// Exponentiated quadratic exp(g + hᵀθ − ½ θᵀkθ). `k` is symmetric but may be
/// indefinite; definiteness is only needed of prior precision + k.
template <typename Scalar>
struct QuadraticFactor {
    using VectorType = Vector<Scalar>;
    using MatrixType = Matrix<Scalar>;

    Scalar g{0};
    VectorType h;
    MatrixType k;

    QuadraticFactor() = default;
    QuadraticFactor(Scalar g_, VectorType h_, const MatrixType& k_)
        : g(g_), h(std::move(h_)), k(detail::symmetrized<Scalar>(k_)) {
        detail::require(k.rows() == k.cols() && h.size() == k.rows(), "factor dimensions disagree");
    }

    static QuadraticFactor identity(Eigen::Index n) {
        return QuadraticFactor(Scalar(0), VectorType::Zero(n), MatrixType::Zero(n, n));
    }

    [[nodiscard]] Eigen::Index dim() const { return h.size(); }

    [[nodiscard]] Scalar log_value(const VectorType& theta) const {
        return g + h.dot(theta) - Scalar(0.5) * theta.dot(k * theta);
    }

    [[nodiscard]] Scalar operator()(const VectorType& theta) const { return std::exp(log_value(theta)); }
};

template <typename Scalar>
struct ProductResult {
    Scalar scale;
    Scalar log_scale;
    GaussianBelief<Scalar> posterior;
};

/// Integral of prior(θ)·factor(θ) and the normalized Gaussian it produces.
///
/// Works relative to the prior mean so that an identity factor returns the
/// prior bit-for-bit: with b = h − kμ,
///   Σ' = (I + Σk)⁻¹Σ,  μ' = μ + Σ'b,
///   log C = g + hᵀμ − ½μᵀkμ + ½bᵀΣ'b + ½(log|Σ'| − log|Σ|).
template <typename Scalar>
ProductResult<Scalar> product_scale_and_posterior(const GaussianBelief<Scalar>& prior,
                                                  const QuadraticFactor<Scalar>& factor) {
    using MatrixType = Matrix<Scalar>;
    using VectorType = Vector<Scalar>;
    detail::require(prior.dim() == factor.dim(), "prior and factor dimensions differ");

    const auto n = prior.dim();
    const MatrixType& sigma = prior.covariance();
    const VectorType& mu = prior.mean();

    const MatrixType system = MatrixType::Identity(n, n) + sigma * factor.k;
    MatrixType post_cov = system.partialPivLu().solve(sigma);
    post_cov = detail::symmetrized<Scalar>(post_cov);

    // A non-PD combined precision shows up as a non-PD posterior covariance.
    Eigen::LLT<MatrixType> llt(post_cov);
    if (llt.info() != Eigen::Success || !post_cov.allFinite()) {
        throw NumericalError("combined precision is not positive definite");
    }

    const VectorType b = factor.h - factor.k * mu;
    const VectorType post_mean = mu + post_cov * b;
    const Scalar log_scale = factor.g + factor.h.dot(mu) - Scalar(0.5) * mu.dot(factor.k * mu) +
                             Scalar(0.5) * b.dot(post_cov * b) +
                             Scalar(0.5) * (detail::log_det<Scalar>(llt) - prior.log_det_covariance());

    return {std::exp(log_scale), log_scale, GaussianBelief<Scalar>(post_mean, post_cov)};
}

/// Recovers the factor that maps `prior` onto `scale`·`posterior`, i.e.
/// scale·N(θ; post) = N(θ; prior)·exp(g′ + h′ᵀθ − ½θᵀk′θ) for every θ.
template <typename Scalar>
QuadraticFactor<Scalar> factor_from_quotient(const GaussianBelief<Scalar>& posterior,
                                             const GaussianBelief<Scalar>& prior, Scalar scale) {
    using VectorType = Vector<Scalar>;
    detail::require(posterior.dim() == prior.dim(), "posterior and prior dimensions differ");
    detail::require(scale > Scalar(0) && std::isfinite(scale), "scale must be positive and finite");

    const VectorType eta_post = posterior.precision() * posterior.mean();
    const VectorType eta_prior = prior.precision() * prior.mean();
    const Scalar g = std::log(scale) + Scalar(0.5) * prior.mean().dot(eta_prior) -
                     Scalar(0.5) * posterior.mean().dot(eta_post) +
                     Scalar(0.5) * (prior.log_det_covariance() - posterior.log_det_covariance());
    return QuadraticFactor<Scalar>(g, eta_post - eta_prior, posterior.precision() - prior.precision());
}

/// E[g + hᵀθ − ½θᵀkθ] for θ ~ belief.
template <typename Scalar>
Scalar expected_log_factor(const GaussianBelief<Scalar>& belief, const QuadraticFactor<Scalar>& factor) {
    detail::require(belief.dim() == factor.dim(), "belief and factor dimensions differ");
    const auto& mu = belief.mean();
    const Scalar trace = (factor.k.cwiseProduct(belief.covariance())).sum();
    return factor.g + factor.h.dot(mu) - Scalar(0.5) * (trace + mu.dot(factor.k * mu));
}

/// KL(p ‖ q) between two Gaussians of equal dimension.
template <typename Scalar>
Scalar kl_divergence(const GaussianBelief<Scalar>& p, const GaussianBelief<Scalar>& q) {
    detail::require(p.dim() == q.dim(), "KL operands differ in dimension");
    const Scalar n = static_cast<Scalar>(p.dim());
    const Scalar trace = (q.precision().cwiseProduct(p.covariance())).sum();
    return Scalar(0.5) * (trace + q.mahalanobis2(p.mean()) - n + q.log_det_covariance() -
                          p.log_det_covariance());
}

/// One draw μ + Lz with z standard normal.
template <typename Scalar, typename Rng>
Vector<Scalar> sample_one(const GaussianBelief<Scalar>& belief, Rng& rng) {
    std::normal_distribution<Scalar> normal;
    Vector<Scalar> z(belief.dim());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    return belief.mean() + belief.llt().matrixL() * z;
}

template <typename Scalar, typename Rng>
std::vector<Vector<Scalar>> sample(const GaussianBelief<Scalar>& belief, Rng& rng, std::size_t count) {
    detail::require(count >= 1, "sample count must be positive");
    std::vector<Vector<Scalar>> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) out.push_back(sample_one(belief, rng));
    return out;
}

/// Random SPD matrix built from the SVD of the Gram matrix MᵀM, M ~ U[0,1)^{n×n}.
/// The singular values are clamped at 1e-6 and rescaled so the largest is 1.
template <typename Scalar, typename Rng>
Matrix<Scalar> random_covariance(Eigen::Index dim, Rng& rng) {
    using MatrixType = Matrix<Scalar>;
    detail::require(dim >= 1, "covariance dimension must be positive");
    std::uniform_real_distribution<Scalar> unif(Scalar(0), Scalar(1));
    MatrixType m(dim, dim);
    // Row-major fill order keeps the draw sequence independent of storage order.
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = unif(rng);

    const MatrixType gram = m.transpose() * m;
    Eigen::JacobiSVD<MatrixType> svd(gram, Eigen::ComputeFullU);
    Vector<Scalar> values = svd.singularValues();
    const Scalar top = values.maxCoeff();
    constexpr Scalar floor = Scalar(1e-6);
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        values[i] = top > Scalar(0) ? std::max(values[i] / top, floor) : Scalar(1);
    }
    const MatrixType& u = svd.matrixU();
    return detail::symmetrized<Scalar>(u * values.asDiagonal() * u.transpose());
}

using GaussianBeliefd = GaussianBelief<double>;
using QuadraticFactord = QuadraticFactor<double>;
using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

}  // namespace aicmab
