#pragma once

#include "aicmab/efe.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace aicmab {

enum class PolicyKind { Oracle, EpsGreedy, Thompson, ActiveInference };

std::string_view to_string(PolicyKind p);
PolicyKind parse_policy_kind(std::string_view name);

inline constexpr double kDefaultEpsilon = 0.25;

/// Everything an agent carries between steps. Updated by value.
struct AgentState {
    std::vector<GaussianBeliefd> beliefs;
    PolicyKind policy = PolicyKind::Oracle;
    FusionMethod fusion = FusionMethod::Laplace;
    double epsilon = kDefaultEpsilon;
    PriorPreference pref{0.001, 0.999};
    std::size_t n_samples = kDefaultSamples;
    std::vector<std::uint64_t> pull_counts;

    /// K arms with N(0, I) beliefs over C-dimensional parameters.
    static AgentState initial(std::size_t num_arms, Eigen::Index context_dim, PolicyKind policy,
                              FusionMethod fusion, double epsilon = kDefaultEpsilon,
                              PriorPreference pref = PriorPreference(0.001, 0.999),
                              std::size_t n_samples = kDefaultSamples);

    [[nodiscard]] std::size_t num_arms() const { return beliefs.size(); }
};

std::size_t oracle_select(const std::vector<double>& true_probs);

/// Explores uniformly with probability ε, otherwise exploits argmax σ(μ_kᵀx).
std::size_t epsilon_greedy_select(const AgentState& state, const ContextVector& x, Rng& rng);

/// One posterior draw per arm; argmax of the drawn activation θ̃_kᵀx.
std::size_t thompson_select(const AgentState& state, const ContextVector& x, Rng& rng);

/// Dispatches on `state.policy`. Only the oracle reads `true_probs`.
std::size_t select_action(const AgentState& state, const ContextVector& x, const std::vector<double>& true_probs,
                          Rng& rng);

/// Fuses the observation into the pulled arm's belief (oracle agents only count).
AgentState update_belief(AgentState state, std::size_t arm, const ContextVector& x, Outcome outcome, Rng& rng);

}  // namespace aicmab
