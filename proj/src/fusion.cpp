#include "aicmab/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace aicmab {

std::string_view to_string(FusionMethod m) {
    switch (m) {
        case FusionMethod::VB: return "vb";
        case FusionMethod::VBIS: return "vbis";
        case FusionMethod::Laplace: return "laplace";
    }
    return "unknown";
}

FusionMethod parse_fusion_method(std::string_view name) {
    if (name == "vb") return FusionMethod::VB;
    if (name == "vbis") return FusionMethod::VBIS;
    if (name == "laplace") return FusionMethod::Laplace;
    throw std::invalid_argument("unknown fusion method: " + std::string(name));
}

double clamp_chat(double c) { return std::clamp(c, kMinChat, 1.0 - kMinChat); }

FusionResult vb_fuse(const GaussianBeliefd& prior, const ContextVector& x, Outcome outcome) {
    detail::require(prior.dim() == x.size(), "prior and context dimensions differ");
    const VariationalParams vp = optimize_variational_params(prior, x);
    const QuadraticFactord factor = bound_coefficients(x, outcome, vp);
    auto product = product_scale_and_posterior(prior, factor);

    FusionDiagnostics diag;
    diag.iterations = vp.iterations;
    diag.converged = vp.converged;
    diag.c_hat_vb = product.scale;
    return {std::move(product.posterior), product.scale, FusionMethod::VB, diag};
}

namespace {

// Self-normalized second moment about `mean`, made positive definite by
// growing a diagonal jitter from 1e-9 when the Cholesky factorization fails.
MatrixXd weighted_covariance(const MatrixXd& samples, const VectorXd& w, const VectorXd& mean, double& jitter) {
    const MatrixXd centered = samples.colwise() - mean;
    MatrixXd cov = centered * w.asDiagonal() * centered.transpose();
    cov = (cov + cov.transpose()) * 0.5;
    jitter = 0.0;
    for (double eps = 1e-9; eps < 1.0; eps *= 10.0) {
        Eigen::LLT<MatrixXd> llt(cov);
        if (llt.info() == Eigen::Success) return cov;
        cov.diagonal().array() += eps - jitter;
        jitter = eps;
    }
    throw NumericalError("importance-sampled covariance could not be made positive definite");
}

}  // namespace

FusionResult vbis_fuse(const GaussianBeliefd& prior, const ContextVector& x, Outcome outcome,
                       std::size_t n_samples, Rng& rng) {
    detail::require(n_samples >= 2, "VBIS needs at least two samples");
    FusionResult vb = vb_fuse(prior, x, outcome);

    // Zero context: the likelihood is σ(0) for every θ, so the posterior is
    // the prior and the marginal is exactly one half.
    if (x.is_zero()) {
        FusionDiagnostics diag = vb.diagnostics;
        diag.effective_sample_size = static_cast<double>(n_samples);
        return {prior, outcome_prob(0.0, outcome), FusionMethod::VBIS, diag};
    }

    // Proposal N(μ_vb, Σ_prior): θ_s = μ_vb + L z_s. Prior and proposal share
    // L, so log prior(θ_s) − log proposal(θ_s) = −z_sᵀd − ½|d|², d = L⁻¹(μ_vb − μ).
    const auto n = prior.dim();
    const auto count = static_cast<Eigen::Index>(n_samples);
    const auto L = prior.llt().matrixL();
    const VectorXd d = L.solve(VectorXd(vb.posterior.mean() - prior.mean()));

    std::normal_distribution<double> normal;
    MatrixXd z(n, count);
    for (Eigen::Index s = 0; s < count; ++s)
        for (Eigen::Index i = 0; i < n; ++i) z(i, s) = normal(rng);
    MatrixXd samples = L * z;
    samples.colwise() += vb.posterior.mean();

    const Eigen::RowVectorXd activation = x.values().transpose() * samples;
    const Eigen::RowVectorXd shift = d.transpose() * z;
    const double half_d2 = 0.5 * d.squaredNorm();
    VectorXd log_w(count);
    for (Eigen::Index s = 0; s < count; ++s) {
        log_w[s] = -shift[s] - half_d2 + log_outcome_prob(activation[s], outcome);
    }
    const double max_log_w = log_w.maxCoeff();
    if (!std::isfinite(max_log_w)) {
        throw NumericalError("all importance weights underflowed; retry with more samples");
    }

    VectorXd w = (log_w.array() - max_log_w).exp().matrix();
    const double sum = w.sum();
    const double c_hat = std::exp(max_log_w) * sum / static_cast<double>(n_samples);
    if (!(c_hat > 0.0)) {
        throw NumericalError("importance-sampled normalization constant underflowed");
    }

    FusionDiagnostics diag = vb.diagnostics;
    diag.effective_sample_size = sum * sum / w.squaredNorm();
    w /= sum;
    VectorXd mean = samples * w;
    MatrixXd cov = weighted_covariance(samples, w, mean, diag.jitter);
    return {GaussianBeliefd(std::move(mean), cov), c_hat, FusionMethod::VBIS, diag};
}

namespace {

double log_joint(const GaussianBeliefd& prior, const VectorXd& theta, const VectorXd& x, Outcome o) {
    return -0.5 * prior.mahalanobis2(theta) + log_outcome_prob(theta.dot(x), o);
}

// (P + s xxᵀ)⁻¹ v with P the prior precision, via Sherman-Morrison on Σ.
VectorXd solve_rank_one(const MatrixXd& sigma, const VectorXd& x, double s, const VectorXd& v) {
    const VectorXd sx = sigma * x;
    const VectorXd sv = sigma * v;
    return sv - (s * x.dot(sv) / (1.0 + s * x.dot(sx))) * sx;
}

}  // namespace

NewtonResult newton_map(const GaussianBeliefd& prior, const ContextVector& x, Outcome outcome) {
    detail::require(prior.dim() == x.size(), "prior and context dimensions differ");
    constexpr double grad_tol = 1e-9;
    constexpr int max_iter = 100;
    constexpr int max_halvings = 30;
    constexpr double local_decrement = 1e-12;

    const VectorXd& xv = x.values();
    const double target = to_int(outcome);
    const MatrixXd& precision = prior.precision();
    VectorXd theta = prior.mean();
    double objective = log_joint(prior, theta, xv, outcome);

    auto gradient = [&](const VectorXd& th) -> VectorXd {
        return -precision * (th - prior.mean()) + (target - sigmoid(th.dot(xv))) * xv;
    };

    VectorXd grad = gradient(theta);
    for (int it = 0; it < max_iter; ++it) {
        const double grad_norm = grad.lpNorm<Eigen::Infinity>();
        if (!std::isfinite(grad_norm)) break;
        if (grad_norm < grad_tol) return {theta, it, grad_norm};

        const double sig = sigmoid(theta.dot(xv));
        const VectorXd step = solve_rank_one(prior.covariance(), xv, sig * (1.0 - sig), grad);
        const double decrement = grad.dot(step);

        if (decrement < local_decrement) {
            // Quadratic model is accurate here; objective differences are below
            // round-off, so take the full step and stop at the gradient floor.
            const VectorXd candidate = theta + step;
            const VectorXd candidate_grad = gradient(candidate);
            if (!(candidate_grad.lpNorm<Eigen::Infinity>() < grad_norm)) return {theta, it, grad_norm};
            theta = candidate;
            grad = candidate_grad;
            objective = log_joint(prior, theta, xv, outcome);
            continue;
        }

        double t = 1.0;
        bool improved = false;
        for (int h = 0; h <= max_halvings; ++h, t *= 0.5) {
            const VectorXd candidate = theta + t * step;
            const double value = log_joint(prior, candidate, xv, outcome);
            if (value > objective) {
                theta = candidate;
                objective = value;
                improved = true;
                break;
            }
        }
        // Ascent direction of a concave objective with no representable gain.
        if (!improved) return {theta, it, grad_norm};
        grad = gradient(theta);
    }

    std::ostringstream msg;
    msg << "Newton MAP did not converge; last iterate [" << theta.transpose() << "]";
    throw NumericalError(msg.str());
}

FusionResult laplace_fuse(const GaussianBeliefd& prior, const ContextVector& x, Outcome outcome) {
    const NewtonResult map = newton_map(prior, x, outcome);
    const VectorXd& xv = x.values();
    const double activation = map.map.dot(xv);
    const double sig = sigmoid(activation);
    const double s = sig * (1.0 - sig);

    // A⁻¹ = (Σ⁻¹ + s xxᵀ)⁻¹, rank-one downdate of the prior covariance.
    const MatrixXd& sigma = prior.covariance();
    const VectorXd sx = sigma * xv;
    const MatrixXd post_cov = sigma - (s / (1.0 + s * xv.dot(sx))) * (sx * sx.transpose());

    GaussianBeliefd posterior = [&] {
        try {
            return GaussianBeliefd(map.map, post_cov);
        } catch (const NumericalError&) {
            throw NumericalError("negative Hessian of the log joint is not positive definite");
        }
    }();

    // g(θ*)(2π)^{n/2}|A|^{-1/2} with the Gaussian normalizers cancelled:
    //   p(o|θ*)·exp(−½ q)·(|Σ_post|/|Σ_prior|)^{1/2}
    const double log_ratio =
        -0.5 * prior.mahalanobis2(map.map) + 0.5 * (posterior.log_det_covariance() - prior.log_det_covariance());
    const double c_hat = outcome_prob(activation, outcome) * std::exp(log_ratio);

    FusionDiagnostics diag;
    diag.iterations = map.iterations;
    return {std::move(posterior), c_hat, FusionMethod::Laplace, diag};
}

FusionResult fuse(FusionMethod method, const GaussianBeliefd& prior, const ContextVector& x, Outcome outcome,
                  std::size_t n_samples, Rng& rng) {
    switch (method) {
        case FusionMethod::VB: return vb_fuse(prior, x, outcome);
        case FusionMethod::VBIS: return vbis_fuse(prior, x, outcome, n_samples, rng);
        case FusionMethod::Laplace: return laplace_fuse(prior, x, outcome);
    }
    throw std::invalid_argument("unknown fusion method");
}

}  // namespace aicmab
