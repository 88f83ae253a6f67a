#pragma once

#include "aicmab/gaussian.hpp"
#include "aicmab/likelihood.hpp"
#include "aicmab/rng.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace aicmab {

enum class FusionMethod { VB, VBIS, Laplace };

std::string_view to_string(FusionMethod m);
FusionMethod parse_fusion_method(std::string_view name);

inline constexpr std::size_t kDefaultSamples = 1000;

/// Lower/upper clamp applied to normalization estimates before they enter logs.
inline constexpr double kMinChat = 1e-12;
double clamp_chat(double c);

struct FusionDiagnostics {
    int iterations = 0;               // variational sweeps or Newton steps
    bool converged = true;
    double effective_sample_size = 0;  // VBIS only
    double jitter = 0;                 // diagonal added to the VBIS covariance
    double c_hat_vb = 0;               // VB estimate underlying VBIS
};

/// Gaussian posterior and normalization estimate from fusing one observation.
struct FusionResult {
    GaussianBeliefd posterior;
    double c_hat;
    FusionMethod method;
    FusionDiagnostics diagnostics;
};

/// Variational Bayes: tighten the sigmoid bound, then multiply it into the prior.
/// `c_hat` is a lower bound on the true marginal probability of `outcome`.
FusionResult vb_fuse(const GaussianBeliefd& prior, const ContextVector& x, Outcome outcome);

/// VB refined by importance sampling with proposal N(μ_vb, Σ_prior).
FusionResult vbis_fuse(const GaussianBeliefd& prior, const ContextVector& x, Outcome outcome,
                       std::size_t n_samples, Rng& rng);

struct NewtonResult {
    VectorXd map;
    int iterations;
    double grad_inf_norm;
};

/// MAP of log N(θ; prior) + log p(outcome | θ) by damped Newton iteration.
NewtonResult newton_map(const GaussianBeliefd& prior, const ContextVector& x, Outcome outcome);

/// Laplace approximation around the Newton MAP.
FusionResult laplace_fuse(const GaussianBeliefd& prior, const ContextVector& x, Outcome outcome);

FusionResult fuse(FusionMethod method, const GaussianBeliefd& prior, const ContextVector& x, Outcome outcome,
                  std::size_t n_samples, Rng& rng);

}  // namespace aicmab
