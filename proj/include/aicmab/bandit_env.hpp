#pragma once

#include "aicmab/likelihood.hpp"
#include "aicmab/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace aicmab {

/// Stationary contextual Bernoulli bandit with a context shared by all arms.
struct Environment {
    std::vector<VectorXd> true_thetas;
    ContextVector context;
    std::vector<double> true_probs;  // σ(θ_kᵀx)
    double best_prob;

    Environment(std::vector<VectorXd> thetas, ContextVector x);

    [[nodiscard]] std::size_t num_arms() const { return true_thetas.size(); }
    [[nodiscard]] Eigen::Index context_dim() const { return context.size(); }
};

/// Draws K arm parameters θ_k ~ N(m_k, S_k) with m_k ~ U[0,1)^C and S_k from
/// random_covariance, then the context with i.i.d. fair binary entries.
Environment generate_environment(std::size_t num_arms, Eigen::Index context_dim, Rng& rng);

Outcome pull(const Environment& env, std::size_t arm, Rng& rng);

/// Tψ* − Σ_k N_T(k)ψ_k, accumulated per arm as N_T(k)(ψ* − ψ_k).
double cumulative_regret(const Environment& env, const std::vector<std::uint64_t>& pull_counts,
                         std::uint64_t total_iterations);

/// JSON manifest with seed, sizes, parameters, context and success probabilities.
void write_manifest(std::ostream& os, const Environment& env, std::uint64_t seed);
Environment read_manifest(std::istream& is, std::uint64_t* seed = nullptr);

}  // namespace aicmab
