#include "aicmab/bandit_env.hpp"

#include <json.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace aicmab {

Environment::Environment(std::vector<VectorXd> thetas, ContextVector x)
    : true_thetas(std::move(thetas)), context(std::move(x)), best_prob(0.0) {
    detail::require(!true_thetas.empty(), "environment needs at least one arm");
    true_probs.reserve(true_thetas.size());
    for (const auto& theta : true_thetas) {
        true_probs.push_back(sigmoid_prob(theta, context, Outcome::One));
    }
    best_prob = *std::max_element(true_probs.begin(), true_probs.end());
}

Environment generate_environment(std::size_t num_arms, Eigen::Index context_dim, Rng& rng) {
    detail::require(num_arms >= 1 && context_dim >= 1, "K and C must be positive");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<VectorXd> thetas;
    thetas.reserve(num_arms);
    for (std::size_t k = 0; k < num_arms; ++k) {
        VectorXd mean(context_dim);
        for (Eigen::Index i = 0; i < context_dim; ++i) mean[i] = unif(rng);
        const MatrixXd cov = random_covariance<double>(context_dim, rng);
        thetas.push_back(sample_one(GaussianBeliefd(mean, cov), rng));
    }
    std::bernoulli_distribution coin(0.5);
    std::vector<int> bits(static_cast<std::size_t>(context_dim));
    for (auto& b : bits) b = coin(rng) ? 1 : 0;
    return Environment(std::move(thetas), ContextVector(bits));
}

Outcome pull(const Environment& env, std::size_t arm, Rng& rng) {
    if (arm >= env.num_arms()) throw std::out_of_range("arm index out of range");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return unif(rng) < env.true_probs[arm] ? Outcome::One : Outcome::Zero;
}

double cumulative_regret(const Environment& env, const std::vector<std::uint64_t>& pull_counts,
                         std::uint64_t total_iterations) {
    detail::require(pull_counts.size() == env.num_arms(), "one pull count per arm is required");
    std::uint64_t sum = 0;
    double regret = 0.0;
    for (std::size_t k = 0; k < pull_counts.size(); ++k) {
        sum += pull_counts[k];
        regret += static_cast<double>(pull_counts[k]) * (env.best_prob - env.true_probs[k]);
    }
    detail::require(sum == total_iterations, "pull counts must sum to the iteration count");
    return regret;
}

void write_manifest(std::ostream& os, const Environment& env, std::uint64_t seed) {
    nlohmann::json j;
    j["seed"] = seed;
    j["K"] = env.num_arms();
    j["C"] = env.context_dim();
    auto& thetas = j["theta"] = nlohmann::json::array();
    for (const auto& t : env.true_thetas) thetas.push_back(std::vector<double>(t.data(), t.data() + t.size()));
    std::vector<int> ctx(static_cast<std::size_t>(env.context_dim()));
    for (Eigen::Index i = 0; i < env.context_dim(); ++i) ctx[static_cast<std::size_t>(i)] = env.context[i];
    j["context"] = ctx;
    j["psi"] = env.true_probs;
    j["psi_best"] = env.best_prob;
    os << j.dump(2) << '\n';
}

Environment read_manifest(std::istream& is, std::uint64_t* seed) {
    const nlohmann::json j = nlohmann::json::parse(is);
    const auto k = j.at("K").get<std::size_t>();
    const auto c = j.at("C").get<Eigen::Index>();
    std::vector<VectorXd> thetas;
    for (const auto& row : j.at("theta")) {
        const auto v = row.get<std::vector<double>>();
        if (static_cast<Eigen::Index>(v.size()) != c) throw std::invalid_argument("manifest theta has wrong length");
        thetas.emplace_back(Eigen::Map<const VectorXd>(v.data(), c));
    }
    if (thetas.size() != k) throw std::invalid_argument("manifest arm count does not match K");
    if (seed) *seed = j.at("seed").get<std::uint64_t>();
    return Environment(std::move(thetas), ContextVector(j.at("context").get<std::vector<int>>()));
}

}  // namespace aicmab
