#pragma once

#include "aicmab/fusion.hpp"

#include <array>
#include <vector>

namespace aicmab {

/// Preferred outcome distribution p_ev(o) of an active-inference agent.
class PriorPreference {
public:
    PriorPreference(double p0, double p1);
    /// Builds (1 − p1, p1).
    static PriorPreference from_p1(double p1);

    [[nodiscard]] double operator[](Outcome o) const { return p_[static_cast<std::size_t>(to_int(o))]; }
    [[nodiscard]] double p0() const { return p_[0]; }
    [[nodiscard]] double p1() const { return p_[1]; }

private:
    std::array<double, 2> p_;
};

/// EFE of one arm split by outcome and by exploitation/exploration terms.
struct EfeBreakdown {
    std::array<double, 2> per_outcome{};
    double total = 0;
    double pragmatic = 0;  // −E_q(o)[log p_ev(o)]
    double epistemic = 0;  // E_q(o)[KL(posterior ‖ prior)]
    std::array<double, 2> c_hat{};
};

/// Contribution of a single outcome given an already computed fusion result.
/// Re-derives the likelihood surrogate from posterior/prior and returns
///   Ĉ log(Ĉ/p_ev(o)) − Ĉ·E_post[log factor′].
double efe_from_fusion(const GaussianBeliefd& belief, const FusionResult& fused, double pref);

double efe_per_outcome(const GaussianBeliefd& belief, const ContextVector& x, Outcome outcome,
                       const PriorPreference& pref, FusionMethod method, Rng& rng,
                       std::size_t n_samples = kDefaultSamples);

EfeBreakdown efe_total(const GaussianBeliefd& belief, const ContextVector& x, const PriorPreference& pref,
                       FusionMethod method, Rng& rng, std::size_t n_samples = kDefaultSamples);

/// Index of the arm with minimal EFE; ties go to the lowest index.
std::size_t select_action_active_inference(const std::vector<GaussianBeliefd>& beliefs, const ContextVector& x,
                                           const PriorPreference& pref, FusionMethod method, Rng& rng,
                                           std::size_t n_samples = kDefaultSamples);

}  // namespace aicmab
