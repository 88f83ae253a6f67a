#include "aicmab/efe.hpp"

#include <cmath>
#include <stdexcept>

namespace aicmab {

PriorPreference::PriorPreference(double p0, double p1) : p_{p0, p1} {
    detail::require(p0 > 0.0 && p0 < 1.0 && p1 > 0.0 && p1 < 1.0, "preference entries must lie in (0,1)");
    detail::require(std::abs(p0 + p1 - 1.0) <= 1e-12, "preference entries must sum to 1");
}

PriorPreference PriorPreference::from_p1(double p1) { return PriorPreference(1.0 - p1, p1); }

namespace {

// Ĉ_vb is a bound, not an estimate of C, so VB alone does not score arms.
void require_scoring_method(FusionMethod method) {
    detail::require(method != FusionMethod::VB, "EFE needs VBIS or Laplace fusion");
}

}  // namespace

double efe_from_fusion(const GaussianBeliefd& belief, const FusionResult& fused, double pref) {
    const double c = clamp_chat(fused.c_hat);
    const QuadraticFactord surrogate = factor_from_quotient(fused.posterior, belief, c);
    const double risk = c * std::log(c / pref);
    const double expected_log_lik = c * expected_log_factor(fused.posterior, surrogate);
    return risk - expected_log_lik;
}

double efe_per_outcome(const GaussianBeliefd& belief, const ContextVector& x, Outcome outcome,
                       const PriorPreference& pref, FusionMethod method, Rng& rng, std::size_t n_samples) {
    require_scoring_method(method);
    const FusionResult fused = fuse(method, belief, x, outcome, n_samples, rng);
    return efe_from_fusion(belief, fused, pref[outcome]);
}

EfeBreakdown efe_total(const GaussianBeliefd& belief, const ContextVector& x, const PriorPreference& pref,
                       FusionMethod method, Rng& rng, std::size_t n_samples) {
    require_scoring_method(method);
    EfeBreakdown out;
    for (const Outcome o : kOutcomes) {
        const auto i = static_cast<std::size_t>(to_int(o));
        const FusionResult fused = fuse(method, belief, x, o, n_samples, rng);
        const double c = clamp_chat(fused.c_hat);
        out.c_hat[i] = c;
        out.per_outcome[i] = efe_from_fusion(belief, fused, pref[o]);
        out.total += out.per_outcome[i];
        out.pragmatic -= c * std::log(pref[o]);
        out.epistemic += c * kl_divergence(fused.posterior, belief);
    }
    return out;
}

std::size_t select_action_active_inference(const std::vector<GaussianBeliefd>& beliefs, const ContextVector& x,
                                           const PriorPreference& pref, FusionMethod method, Rng& rng,
                                           std::size_t n_samples) {
    detail::require(!beliefs.empty(), "at least one arm is required");
    std::size_t best = 0;
    double best_efe = 0.0;
    for (std::size_t k = 0; k < beliefs.size(); ++k) {
        const double value = efe_total(beliefs[k], x, pref, method, rng, n_samples).total;
        if (k == 0 || value < best_efe) {
            best = k;
            best_efe = value;
        }
    }
    return best;
}

}  // namespace aicmab
